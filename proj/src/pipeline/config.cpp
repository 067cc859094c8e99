#include "senti/pipeline/config.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace senti::pipeline {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Lexicon:
      return "lexicon";
    case ModelKind::Mnb:
      return "mnb";
    case ModelKind::Svm:
      return "svm";
    case ModelKind::Bert:
      return "bert";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  const std::string n = ascii_lower(trim(name));
  if (n == "lexicon") return ModelKind::Lexicon;
  if (n == "mnb") return ModelKind::Mnb;
  if (n == "svm") return ModelKind::Svm;
  if (n == "bert") return ModelKind::Bert;
  return std::nullopt;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "corpus",          "corpus_format",        "positive_lexicon",    "negative_lexicon",
      "stopwords",       "output_dir",           "keywords",            "keyword_match",
      "dedupe_key",      "skip_bad_rows",        "verdicts",            "label_overrides",
      "split",           "split_stratified",     "models",              "vocab_min_count",
      "mnb.alpha",       "svm.lambda",           "svm.epochs",          "svm.seed",
      "svm.features",    "encoder",              "encoder.num_layers",  "encoder.num_heads",
      "encoder.hidden_size", "encoder.feedforward_size", "encoder.max_sequence_length", "encoder.dropout_rate",
      "profile",         "train.batch_size",     "train.epochs",        "train.learning_rate",
      "train.adam_beta1", "train.adam_beta2",    "train.adam_epsilon",  "train.seed",
      "top_k",           "ngram_sizes",          "cloud_stopwords",     "seed",
  };
  return keys;
}

namespace {

class Reader {
 public:
  Reader(const kv::Document& doc, std::filesystem::path base) : doc_(doc), base_(std::move(base)) {}

  std::string required_string(const std::string& key) const {
    auto v = doc_.get_string(key);
    if (!v || trim(*v).empty()) throw ValidationError(fmt::format("{}: missing required key '{}'", doc_.source(), key));
    return trim(*v);
  }

  std::filesystem::path path(const std::string& value) const {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base_ / p;
  }

  std::filesystem::path existing_path(const std::string& key, const std::string& value) const {
    auto p = path(value);
    if (!std::filesystem::is_regular_file(p)) {
      throw ValidationError(fmt::format("{}: '{}' points to '{}', which does not exist", doc_.source(), key,
                                        p.string()));
    }
    return p;
  }

  [[noreturn]] void bad(const std::string& key, std::string_view why) const {
    throw ValidationError(fmt::format("{}: bad value for '{}': {}", doc_.source(), key, why));
  }

  std::size_t positive_size(const std::string& key, std::size_t fallback) const {
    auto v = doc_.get_uint(key);
    if (!v) return fallback;
    if (*v == 0) bad(key, "must be at least 1");
    return static_cast<std::size_t>(*v);
  }

 private:
  const kv::Document& doc_;
  std::filesystem::path base_;
};

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides,
                           const std::optional<std::string>& output_dir_override) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ValidationError(fmt::format("config file '{}' not found", path.string()));
  }
  kv::Document doc = kv::Document::load(path);
  for (const auto& [k, v] : overrides) doc.set(k, v);
  const auto& keys = known_keys();
  for (const auto& [k, e] : doc.entries()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ValidationError(e.line ? fmt::format("{}:{}: unknown key '{}'", doc.source(), e.line, k)
                                   : fmt::format("unknown override key '{}'", k));
    }
  }

  PipelineConfig c;
  c.source = path;
  Reader r(doc, path.parent_path());

  c.corpus = r.existing_path("corpus", r.required_string("corpus"));
  if (auto f = doc.get_string("corpus_format")) {
    auto fmt_ = corpus::parse_format(*f);
    if (!fmt_) r.bad("corpus_format", "expected jsonl or csv");
    c.corpus_format = *fmt_;
  } else if (auto guessed = corpus::format_from_path(c.corpus)) {
    c.corpus_format = *guessed;
  } else {
    r.bad("corpus", "cannot infer the format from the extension; set corpus_format");
  }
  c.positive_lexicon = r.existing_path("positive_lexicon", r.required_string("positive_lexicon"));
  c.negative_lexicon = r.existing_path("negative_lexicon", r.required_string("negative_lexicon"));
  c.stopwords = r.existing_path("stopwords", r.required_string("stopwords"));
  if (output_dir_override && !output_dir_override->empty()) {
    c.output_dir = *output_dir_override;
  } else {
    c.output_dir = r.path(r.required_string("output_dir"));
  }

  c.keywords = doc.get_list("keywords").value_or(std::vector<std::string>{});
  for (auto& k : c.keywords) k = ascii_lower(k);
  if (c.keywords.empty()) r.bad("keywords", "at least one keyword is required");
  if (auto m = doc.get_string("keyword_match")) {
    const auto v = ascii_lower(trim(*m));
    if (v == "any") {
      c.keyword_match = corpus::KeywordMatch::Any;
    } else if (v == "all") {
      c.keyword_match = corpus::KeywordMatch::All;
    } else {
      r.bad("keyword_match", "expected any or all");
    }
  }
  if (auto d = doc.get_string("dedupe_key")) {
    const auto v = ascii_lower(trim(*d));
    if (v == "id") {
      c.dedupe_key = corpus::DedupeKey::Id;
    } else if (v == "normalized_text") {
      c.dedupe_key = corpus::DedupeKey::NormalizedText;
    } else {
      r.bad("dedupe_key", "expected id or normalized_text");
    }
  }
  c.skip_bad_rows = doc.get_bool("skip_bad_rows").value_or(false);
  if (auto v = doc.get_string("verdicts")) c.verdicts = r.existing_path("verdicts", trim(*v));
  if (auto v = doc.get_string("label_overrides")) c.label_overrides = r.existing_path("label_overrides", trim(*v));

  c.seed = doc.get_uint("seed").value_or(0);
  c.split.seed = c.seed;
  if (auto s = doc.get_list("split")) {
    if (s->size() != 3) r.bad("split", "expected three fractions: train, validation, test");
    try {
      c.split.train = corpus::Fraction::parse((*s)[0]);
      c.split.validation = corpus::Fraction::parse((*s)[1]);
      c.split.test = corpus::Fraction::parse((*s)[2]);
    } catch (const ValidationError& e) {
      r.bad("split", e.what());
    }
  }
  c.split.stratified = doc.get_bool("split_stratified").value_or(false);
  try {
    c.split.validate();
  } catch (const ValidationError& e) {
    r.bad("split", e.what());
  }

  const auto models = doc.get_list("models").value_or(std::vector<std::string>{"lexicon", "mnb", "svm", "bert"});
  for (const auto& m : models) {
    auto kind = parse_model_kind(m);
    if (!kind) r.bad("models", fmt::format("unknown model '{}' (expected lexicon, mnb, svm, bert)", m));
    if (std::find(c.models.begin(), c.models.end(), *kind) == c.models.end()) c.models.push_back(*kind);
  }
  if (c.models.empty()) r.bad("models", "select at least one model");

  c.vocab_min_count = r.positive_size("vocab_min_count", 1);
  if (auto a = doc.get_double("mnb.alpha")) {
    if (!(*a > 0.0)) r.bad("mnb.alpha", "must be positive");
    c.mnb_alpha = *a;
  }
  if (auto l = doc.get_double("svm.lambda")) {
    if (!(*l > 0.0)) r.bad("svm.lambda", "must be positive");
    c.svm.lambda = *l;
  }
  c.svm.epochs = r.positive_size("svm.epochs", c.svm.epochs);
  c.svm.seed = doc.get_uint("svm.seed").value_or(c.seed);
  if (auto f = doc.get_string("svm.features")) {
    auto mode = bow::parse_feature_mode(*f);
    if (!mode) r.bad("svm.features", "expected tf or tfidf");
    c.svm.feature_mode = *mode;
  }

  // Profile errors from the encoder module do not know the file name.
  auto in_file = [&](auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}: {}", doc.source(), e.what()));
    }
  };
  c.encoder_name = ascii_lower(trim(doc.get_string("encoder").value_or("desk")));
  in_file([&] { c.encoder = encoder::EncoderConfig::named(c.encoder_name); });
  {
    c.encoder.num_layers = r.positive_size("encoder.num_layers", c.encoder.num_layers);
    c.encoder.num_heads = r.positive_size("encoder.num_heads", c.encoder.num_heads);
    c.encoder.hidden_size = r.positive_size("encoder.hidden_size", c.encoder.hidden_size);
    c.encoder.feedforward_size = r.positive_size("encoder.feedforward_size", c.encoder.feedforward_size);
    c.encoder.max_sequence_length = r.positive_size("encoder.max_sequence_length", c.encoder.max_sequence_length);
    if (auto d = doc.get_double("encoder.dropout_rate")) c.encoder.dropout_rate = *d;
    auto probe = c.encoder;
    probe.vocab_size = 1;
    in_file([&] { probe.validate(); });
  }
  in_file([&] {
    c.profile = encoder::TrainProfile::named(ascii_lower(trim(doc.get_string("profile").value_or("desk"))));
  });
  c.profile.seed = c.seed;
  c.profile.apply_overrides(doc, "train.");
  in_file([&] { c.profile.validate(); });

  c.top_k = r.positive_size("top_k", c.top_k);
  if (auto sizes = doc.get_list("ngram_sizes")) {
    c.ngram_sizes.clear();
    for (const auto& s : *sizes) {
      kv::Document one;
      one.set("n", s);
      const auto n = one.get_uint("n");
      if (!n || *n == 0) r.bad("ngram_sizes", fmt::format("'{}' is not a positive integer", s));
      c.ngram_sizes.push_back(static_cast<std::size_t>(*n));
    }
  }
  c.cloud_stopwords = doc.get_list("cloud_stopwords").value_or(std::vector<std::string>{});
  for (auto& w : c.cloud_stopwords) w = ascii_lower(w);

  for (const auto& [k, e] : doc.entries()) {
    if (k != "output_dir") c.canonical_text += fmt::format("{} = {}\n", k, trim(e.value));
  }
  return c;
}

}  // namespace senti::pipeline
