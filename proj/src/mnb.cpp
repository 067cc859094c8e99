#include "senti/mnb.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>

namespace senti::bow {

using nlohmann::json;

MnbModel mnb_train(std::span<const Document> train, const BowVocab& vocab, const MnbOptions& options) {
  if (!(options.alpha > 0.0)) throw ValidationError("smoothing alpha must be positive");
  if (train.empty()) throw ValidationError("cannot train naive Bayes on an empty set");
  const auto labels = require_labels(train);
  const std::size_t V = vocab.size();

  std::array<std::size_t, kNumClasses> docs_per_class{};
  std::array<std::vector<double>, kNumClasses> token_counts;
  std::array<double, kNumClasses> total_tokens{};
  for (auto& row : token_counts) row.assign(V, 0.0);

  for (std::size_t i = 0; i < train.size(); ++i) {
    const std::size_t c = class_index(labels[i]);
    ++docs_per_class[c];
    for (const auto& t : train[i].tokens) {
      if (auto idx = vocab.index_of(t)) {
        token_counts[c][*idx] += 1.0;
        total_tokens[c] += 1.0;
      }
    }
  }

  MnbModel m;
  m.smoothing_alpha = options.alpha;
  const double n = static_cast<double>(train.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (docs_per_class[c] == 0) {
      if (options.require_all_classes) {
        throw ValidationError(fmt::format("class '{}' is absent from the training data", to_string(label_from_index(c))));
      }
      m.class_log_prior[c] = -std::numeric_limits<double>::infinity();
    } else {
      m.class_log_prior[c] = std::log(static_cast<double>(docs_per_class[c]) / n);
    }
    const double denom = total_tokens[c] + options.alpha * static_cast<double>(V);
    m.token_log_likelihood[c].resize(V);
    for (std::size_t t = 0; t < V; ++t) {
      m.token_log_likelihood[c][t] = std::log((token_counts[c][t] + options.alpha) / denom);
    }
  }
  return m;
}

Prediction mnb_predict(std::span<const std::string> tokens, const MnbModel& model, const BowVocab& vocab) {
  const SparseVector counts = vectorize(tokens, vocab, FeatureMode::Tf);
  Prediction p;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    p.scores[c] = model.class_log_prior[c] + counts.dot(model.token_log_likelihood[c]);
  }
  p.label = argmax_label(p.scores);
  return p;
}

namespace {

json encode_log(double x) { return std::isinf(x) ? json(nullptr) : json(x); }
double decode_log(const json& j) { return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>(); }

}  // namespace

void save_mnb(const std::filesystem::path& path, const MnbModel& model, const BowVocab& vocab) {
  json priors = json::array();
  for (double p : model.class_log_prior) priors.push_back(encode_log(p));
  json j = {{"magic", kModelMagic},
            {"version", kModelVersion},
            {"kind", "mnb"},
            {"feature_mode", "tf"},
            {"smoothing_alpha", model.smoothing_alpha},
            {"vocab", vocab_to_json(vocab)},
            {"class_log_prior", priors},
            {"token_log_likelihood", model.token_log_likelihood}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

std::pair<MnbModel, BowVocab> load_mnb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("model file not found: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  if (j.value("magic", "") != kModelMagic || j.value("kind", "") != "mnb") {
    throw ValidationError(path.string() + " is not a naive Bayes model file");
  }
  if (j.value("version", 0) != kModelVersion) throw ValidationError(path.string() + ": unsupported model version");
  BowVocab vocab = vocab_from_json(j.at("vocab"));
  MnbModel m;
  m.smoothing_alpha = j.at("smoothing_alpha").get<double>();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.class_log_prior[c] = decode_log(j.at("class_log_prior").at(c));
    m.token_log_likelihood[c] = j.at("token_log_likelihood").at(c).get<std::vector<double>>();
    if (m.token_log_likelihood[c].size() != vocab.size()) throw ValidationError(path.string() + ": weight shape mismatch");
  }
  return {std::move(m), std::move(vocab)};
}

}  // namespace senti::bow
