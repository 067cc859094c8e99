#include "senti/pipeline/commands.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <unordered_set>

#include "senti/csv.hpp"
#include "senti/encoder/checkpoint.hpp"
#include "senti/encoder/model.hpp"
#include "senti/encoder/train.hpp"
#include "senti/fixture.hpp"
#include "senti/hash.hpp"
#include "senti/lexicon.hpp"
#include "senti/mnb.hpp"
#include "senti/pipeline/manifest.hpp"
#include "senti/preprocess.hpp"
#include "senti/svm.hpp"
#include "senti/viz.hpp"

namespace senti::pipeline {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Document files

void write_documents(const fs::path& path, std::span<const Document> docs) {
  std::string text;
  for (const auto& d : docs) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["raw_text"] = d.raw_text;
    j["clean_text"] = d.clean_text;
    j["tokens"] = d.tokens;
    j["label"] = d.label ? nlohmann::ordered_json(std::string(to_string(*d.label))) : nlohmann::ordered_json();
    text += j.dump() + "\n";
  }
  write_text_file(path, text);
}

std::vector<Document> read_documents(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot read documents file '{}'", path.string()));
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Document d;
      d.id = j.at("id").get<std::string>();
      d.raw_text = j.value("raw_text", "");
      d.clean_text = j.at("clean_text").get<std::string>();
      d.tokens = j.at("tokens").get<std::vector<std::string>>();
      if (!j.at("label").is_null()) {
        auto label = parse_label(j.at("label").get<std::string>());
        if (!label) throw ValidationError("unknown label");
        d.label = label;
      }
      docs.push_back(std::move(d));
    } catch (const std::exception& e) {
      throw ValidationError(fmt::format("{}:{}: malformed document ({})", path.string(), line_no, e.what()));
    }
  }
  return docs;
}

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing

void require_artifact(const fs::path& path, std::string_view stage, std::string_view producer) {
  if (!fs::exists(path)) {
    throw ValidationError(fmt::format("{} needs '{}', which is missing; run `senti {}` first", stage, path.string(),
                                      producer));
  }
}

class StageManifest {
 public:
  StageManifest(const PipelineConfig& config, std::string stage) : config_(config) {
    m_.stage = std::move(stage);
    m_.config_sha256 = sha256_hex(config.canonical_text);
  }
  // Files under the output directory are named relative to it; everything
  // else relative to the config file's directory.
  void input(const fs::path& file) { m_.inputs.push_back({name(file), sha256_file(file)}); }
  void output(const fs::path& file) { m_.outputs.push_back({name(file), sha256_file(file)}); }
  void write(const fs::path& dir) { m_.write(dir / "manifest.json"); }

 private:
  std::string name(const fs::path& file) const {
    const auto out_root = fs::weakly_canonical(config_.output_dir);
    const auto abs = fs::weakly_canonical(file);
    const auto rel = abs.lexically_relative(out_root);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return relative_name(file, config_.source.parent_path());
  }

  const PipelineConfig& config_;
  Manifest m_;
};

std::optional<fs::path> effective(const std::optional<fs::path>& configured, const fs::path& fallback) {
  if (configured) return configured;
  if (fs::exists(fallback)) return fallback;
  return std::nullopt;
}

std::vector<std::string> read_ids_from_jsonl(const fs::path& path, std::vector<TweetRecord>* records) {
  auto result = corpus::ingest_file(path, corpus::RecordFormat::Jsonl);
  if (!result.errors.empty()) {
    throw ValidationError(fmt::format("{}:{}: {}", path.string(), result.errors.front().line,
                                      result.errors.front().message));
  }
  std::vector<std::string> ids;
  for (const auto& r : result.records) ids.push_back(r.id);
  if (records) *records = std::move(result.records);
  return ids;
}

std::string items_digest(std::span<const ReviewItem> items) {
  std::string canon;
  for (const auto& it : items) canon += csv::format_row({it.id, it.text, it.proposed});
  return sha256_hex(canon);
}

// ---------------------------------------------------------------------------
// Split bookkeeping

enum class Part { Train, Validation, Test };

constexpr std::string_view part_name(Part p) {
  return p == Part::Train ? "train" : p == Part::Validation ? "validation" : "test";
}

void write_split(const fs::path& path, const corpus::Split& s) {
  std::string text = "id,partition\n";
  auto add = [&](const std::vector<Document>& docs, Part p) {
    for (const auto& d : docs) text += csv::format_row({d.id, std::string(part_name(p))});
  };
  add(s.train, Part::Train);
  add(s.validation, Part::Validation);
  add(s.test, Part::Test);
  write_text_file(path, text);
}

std::vector<Document> documents_in_part(const fs::path& split_path, std::span<const Document> docs, Part part) {
  std::ifstream in(split_path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot read '{}'", split_path.string()));
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ValidationError(fmt::format("'{}' is empty", split_path.string()));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < docs.size(); ++i) index.emplace(docs[i].id, i);
  std::vector<Document> out;
  while (reader.next(fields)) {
    if (fields.size() != 2) {
      throw ValidationError(fmt::format("{}:{}: expected id,partition", split_path.string(), reader.record_line()));
    }
    if (fields[1] != part_name(part)) continue;
    auto it = index.find(fields[0]);
    if (it == index.end()) {
      throw ValidationError(fmt::format("{}:{}: id '{}' is not in the labeled documents; rerun `senti train`",
                                        split_path.string(), reader.record_line(), fields[0]));
    }
    out.push_back(docs[it->second]);
  }
  return out;
}

fs::path model_artifact(const Layout& layout, ModelKind kind) {
  switch (kind) {
    case ModelKind::Mnb:
      return layout.mnb_model();
    case ModelKind::Svm:
      return layout.svm_model();
    case ModelKind::Bert:
      return layout.bert_dir() / "checkpoint.bin";
    case ModelKind::Lexicon:
      break;
  }
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages

void cmd_ingest(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  const Layout layout{config.output_dir};
  const auto verdicts_path = effective(config.verdicts, layout.verdicts());
  corpus::VerdictMap verdicts;
  if (verdicts_path) verdicts = corpus::load_verdicts(*verdicts_path);

  auto ingested = corpus::ingest_file(config.corpus, config.corpus_format, config.keywords);
  for (const auto& e : ingested.errors) err << fmt::format("{}:{}: {}\n", config.corpus.string(), e.line, e.message);
  if (!ingested.errors.empty() && !config.skip_bad_rows) {
    throw ValidationError(fmt::format("{} malformed row(s) in '{}'; fix them or set skip_bad_rows = true",
                                      ingested.errors.size(), config.corpus.string()));
  }
  const auto deduped = corpus::dedupe(ingested.records, config.dedupe_key);
  const auto candidates = corpus::filter_relevant(deduped.kept, config.keywords, nullptr, config.keyword_match);
  const auto relevant =
      corpus::filter_relevant(deduped.kept, config.keywords, verdicts_path ? &verdicts : nullptr, config.keyword_match);
  for (const auto& id : relevant.unknown_verdict_ids) {
    err << fmt::format("{}: verdict for unknown id '{}'\n", verdicts_path->string(), id);
  }

  fs::create_directories(layout.ingest_dir());
  corpus::write_jsonl(layout.candidates(), candidates.kept);
  corpus::write_jsonl(layout.corpus(), relevant.kept);

  nlohmann::ordered_json report;
  report["rows_read"] = ingested.rows_read;
  report["malformed_rows"] = ingested.errors.size();
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const auto& e : ingested.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
  report["errors"] = std::move(errors);
  report["records"] = ingested.records.size();
  report["duplicates_removed"] = deduped.removed.size();
  report["dropped_by_keyword"] = relevant.dropped_by_keyword;
  report["dropped_by_verdict"] = relevant.dropped_by_verdict;
  report["kept_by_verdict"] = relevant.kept_by_verdict;
  report["unknown_verdict_ids"] = relevant.unknown_verdict_ids;
  report["kept"] = relevant.kept.size();
  const auto report_path = layout.ingest_dir() / "report.json";
  write_text_file(report_path, report.dump(2) + "\n");

  StageManifest m(config, "ingest");
  m.input(config.corpus);
  if (verdicts_path) m.input(*verdicts_path);
  m.output(layout.candidates());
  m.output(layout.corpus());
  m.output(report_path);
  m.write(layout.ingest_dir());

  out << fmt::format(
      "ingest: {} rows read, {} malformed, {} duplicates removed, {} off-topic, {} dropped by verdict, {} kept\n",
      ingested.rows_read, ingested.errors.size(), deduped.removed.size(), relevant.dropped_by_keyword,
      relevant.dropped_by_verdict, relevant.kept.size());
}

ReviewOutcome cmd_review(const PipelineConfig& config, ReviewMode mode, const std::optional<fs::path>& import_path,
                         bool reset, std::istream& in, std::ostream& out) {
  const Layout layout{config.output_dir};
  std::vector<ReviewItem> items;
  fs::path output_path, progress_path;
  if (mode == ReviewMode::Relevance) {
    require_artifact(layout.candidates(), "review", "ingest");
    std::vector<TweetRecord> records;
    read_ids_from_jsonl(layout.candidates(), &records);
    for (const auto& r : records) items.push_back({r.id, r.text, "keep"});
    output_path = layout.verdicts();
    progress_path = layout.review_dir() / "relevance_progress.json";
  } else {
    require_artifact(layout.worksheet(), "review --mode labels", "label");
    for (const auto& row : lexicon::read_worksheet(layout.worksheet())) {
      items.push_back({row.id, row.clean_text, std::string(to_string(row.proposed_label))});
    }
    output_path = layout.label_overrides();
    progress_path = layout.review_dir() / "labels_progress.json";
  }
  if (import_path && !fs::is_regular_file(*import_path)) {
    throw ValidationError(fmt::format("import file '{}' not found", import_path->string()));
  }
  fs::create_directories(layout.review_dir());
  if (reset) {
    fs::remove(progress_path);
    fs::remove(output_path);
  }
  const std::string digest = items_digest(items);
  if (import_path) {
    auto outcome = import_review(mode, items, digest, *import_path, progress_path, output_path);
    out << fmt::format("review: imported {} decisions into {}\n", outcome.reviewed, output_path.string());
    return outcome;
  }
  return run_review(mode, items, digest, progress_path, output_path, in, out);
}

void cmd_label(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  const Layout layout{config.output_dir};
  require_artifact(layout.corpus(), "label", "ingest");
  const auto stopwords = preprocess::load_stopwords(config.stopwords);
  const auto dict = lexicon::load_lexicon(config.positive_lexicon, config.negative_lexicon);
  const auto overrides_path = effective(config.label_overrides, layout.label_overrides());
  lexicon::LabelOverrides overrides;
  if (overrides_path) overrides = lexicon::load_label_overrides(*overrides_path);

  std::vector<TweetRecord> records;
  read_ids_from_jsonl(layout.corpus(), &records);
  const auto docs = preprocess::make_documents(records, stopwords);
  const auto labeled = lexicon::label_corpus(docs, dict, overrides_path ? &overrides : nullptr);
  for (const auto& id : labeled.unknown_override_ids) {
    err << fmt::format("{}: override for unknown id '{}'\n", overrides_path->string(), id);
  }

  fs::create_directories(layout.label_dir());
  write_documents(layout.documents(), labeled.documents);
  lexicon::write_worksheet(layout.worksheet(), labeled.worksheet);
  const auto dist = viz::sentiment_distribution(labeled.documents);
  const auto dist_path = layout.label_dir() / "distribution.csv";
  write_text_file(dist_path, viz::distribution_csv(dist));

  StageManifest m(config, "label");
  m.input(layout.corpus());
  m.input(config.stopwords);
  m.input(config.positive_lexicon);
  m.input(config.negative_lexicon);
  if (overrides_path) m.input(*overrides_path);
  m.output(layout.documents());
  m.output(layout.worksheet());
  m.output(dist_path);
  m.write(layout.label_dir());

  out << fmt::format("label: {} documents ({} negative, {} neutral, {} positive), {} overrides applied\n",
                     labeled.documents.size(), dist[0], dist[1], dist[2], overrides.size());
}

void cmd_train(const PipelineConfig& config, std::ostream& out) {
  const Layout layout{config.output_dir};
  require_artifact(layout.documents(), "train", "label");
  const auto docs = read_documents(layout.documents());
  const auto parts = corpus::split(docs, config.split);
  fs::create_directories(layout.train_dir());
  write_split(layout.split(), parts);
  out << fmt::format("train: split {} / {} / {}\n", parts.train.size(), parts.validation.size(), parts.test.size());

  StageManifest m(config, "train");
  m.input(layout.documents());
  m.output(layout.split());
  for (ModelKind kind : config.models) {
    switch (kind) {
      case ModelKind::Lexicon:
        break;
      case ModelKind::Mnb: {
        const auto vocab = bow::build_vocab(parts.train, config.vocab_min_count);
        bow::MnbOptions opts;
        opts.alpha = config.mnb_alpha;
        bow::save_mnb(layout.mnb_model(), bow::mnb_train(parts.train, vocab, opts), vocab);
        m.output(layout.mnb_model());
        out << fmt::format("train: mnb over {} features\n", vocab.size());
        break;
      }
      case ModelKind::Svm: {
        const auto vocab = bow::build_vocab(parts.train, config.vocab_min_count);
        const auto model = bow::svm_train(parts.train, vocab, config.svm);
        bow::save_svm(layout.svm_model(), model, vocab);
        m.output(layout.svm_model());
        out << fmt::format("train: svm over {} features, lambda {}\n", vocab.size(), config.svm.lambda);
        break;
      }
      case ModelKind::Bert: {
        const auto vocab = encoder::build_token_vocab(parts.train, config.vocab_min_count);
        auto enc = config.encoder;
        enc.vocab_size = vocab.size();
        out << fmt::format("train: bert L={} H={} D={} F={} S={} V={}, batch {}, {} epochs, lr {}\n", enc.num_layers,
                           enc.num_heads, enc.hidden_size, enc.feedforward_size, enc.max_sequence_length,
                           enc.vocab_size, config.profile.batch_size, config.profile.epochs,
                           kv::format_double(config.profile.learning_rate));
        const auto result = encoder::fine_tune(parts.train, parts.validation, vocab, enc, config.profile, std::nullopt,
                                               [&](const encoder::EpochStats& s) {
                                                 out << fmt::format("  epoch {:>2}  loss {:.4f}  acc {:.4f}", s.epoch,
                                                                    s.train_loss, s.train_accuracy);
                                                 if (s.validation_accuracy) {
                                                   out << fmt::format("  val_loss {:.4f}  val_acc {:.4f}",
                                                                      *s.validation_loss, *s.validation_accuracy);
                                                 }
                                                 out << "\n";
                                                 out.flush();
                                               });
        fs::create_directories(layout.bert_dir());
        const auto ckpt = layout.bert_dir() / "checkpoint.bin";
        const auto vocab_path = layout.bert_dir() / "vocab.txt";
        const auto history = layout.bert_dir() / "history.csv";
        const auto profile = layout.bert_dir() / "profile.txt";
        encoder::save_checkpoint(ckpt, enc, result.params);
        encoder::save_token_vocab(vocab_path, vocab);
        encoder::write_history_csv(history, result.history, config.profile);
        write_text_file(profile, config.profile.to_text());
        for (const auto& p : {ckpt, vocab_path, history, profile}) m.output(p);
        break;
      }
    }
  }
  m.write(layout.train_dir());
}

void cmd_eval(const PipelineConfig& config, std::ostream& out) {
  const Layout layout{config.output_dir};
  require_artifact(layout.documents(), "eval", "label");
  require_artifact(layout.split(), "eval", "train");
  for (ModelKind kind : config.models) {
    if (kind != ModelKind::Lexicon) require_artifact(model_artifact(layout, kind), "eval", "train");
  }
  const auto docs = read_documents(layout.documents());
  const auto test = documents_in_part(layout.split(), docs, Part::Test);
  if (test.empty()) throw ValidationError("the test split is empty; adjust `split` so evaluation has documents");
  const auto truth = bow::require_labels(test);

  StageManifest m(config, "eval");
  m.input(layout.documents());
  m.input(layout.split());
  fs::create_directories(layout.eval_dir());

  std::vector<eval::NamedReport> reports;
  std::vector<std::vector<SentimentLabel>> all_predictions;
  for (ModelKind kind : config.models) {
    std::vector<SentimentLabel> predicted;
    predicted.reserve(test.size());
    switch (kind) {
      case ModelKind::Lexicon: {
        const auto dict = lexicon::load_lexicon(config.positive_lexicon, config.negative_lexicon);
        m.input(config.positive_lexicon);
        m.input(config.negative_lexicon);
        for (const auto& d : test) predicted.push_back(lexicon::score_document(d.tokens, dict).label);
        break;
      }
      case ModelKind::Mnb: {
        const auto [model, vocab] = bow::load_mnb(layout.mnb_model());
        m.input(layout.mnb_model());
        for (const auto& d : test) predicted.push_back(bow::mnb_predict(d, model, vocab).label);
        break;
      }
      case ModelKind::Svm: {
        const auto [model, vocab] = bow::load_svm(layout.svm_model());
        m.input(layout.svm_model());
        for (const auto& d : test) predicted.push_back(bow::svm_predict(d, model, vocab).label);
        break;
      }
      case ModelKind::Bert: {
        const auto ckpt_path = model_artifact(layout, kind);
        const auto vocab_path = layout.bert_dir() / "vocab.txt";
        require_artifact(vocab_path, "eval", "train");
        const auto ck = encoder::load_checkpoint(ckpt_path);
        const auto vocab = encoder::load_token_vocab(vocab_path);
        m.input(ckpt_path);
        m.input(vocab_path);
        for (const auto& d : test) predicted.push_back(encoder::predict(d.tokens, ck.params, vocab, ck.config).label);
        break;
      }
    }
    eval::NamedReport named{std::string(to_string(kind)), eval::metrics(eval::confusion(truth, predicted))};
    const auto path = layout.eval_dir() / (named.name + ".json");
    write_text_file(path, eval::report_json(named));
    m.output(path);
    out << fmt::format("eval: {:<8} macro P {:.4f}  R {:.4f}  F {:.4f}  acc {:.4f}\n", named.name,
                       named.report.macro_precision, named.report.macro_recall, named.report.macro_f,
                       named.report.accuracy);
    reports.push_back(std::move(named));
    all_predictions.push_back(std::move(predicted));
  }

  std::string pred_csv = "id,true";
  for (const auto& r : reports) pred_csv += "," + r.name;
  pred_csv += "\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    std::vector<std::string> row{test[i].id, std::string(to_string(truth[i]))};
    for (const auto& p : all_predictions) row.emplace_back(to_string(p[i]));
    pred_csv += csv::format_row(row);
  }
  const auto pred_path = layout.eval_dir() / "predictions.csv";
  write_text_file(pred_path, pred_csv);
  m.output(pred_path);

  if (reports.size() >= 2) {
    const auto rows = eval::compare(reports);
    const auto csv_path = layout.eval_dir() / "comparison.csv";
    const auto txt_path = layout.eval_dir() / "comparison.txt";
    write_text_file(csv_path, eval::comparison_csv(rows));
    write_text_file(txt_path, eval::comparison_text(rows));
    m.output(csv_path);
    m.output(txt_path);
    out << "\n" << eval::comparison_text(rows);
  }
  m.write(layout.eval_dir());
}

void cmd_viz(const PipelineConfig& config, std::ostream& out) {
  const Layout layout{config.output_dir};
  require_artifact(layout.documents(), "viz", "label");
  const auto docs = read_documents(layout.documents());
  fs::create_directories(layout.viz_dir());
  StageManifest m(config, "viz");
  m.input(layout.documents());
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = layout.viz_dir() / name;
    write_text_file(path, content);
    m.output(path);
  };
  for (std::size_t n : config.ngram_sizes) {
    const auto table = viz::ngrams(docs, n, config.top_k);
    emit(fmt::format("ngram_{}.csv", n), viz::ngram_csv(table));
    if (!table.entries.empty()) emit(fmt::format("ngram_{}.svg", n), viz::ngram_svg(table));
    if (!table.entries.empty()) {
      out << fmt::format("viz: top {}-gram '{}' ({})\n", n, join(table.entries.front().gram, " "),
                         table.entries.front().count);
    }
  }
  const std::unordered_set<std::string> extra(config.cloud_stopwords.begin(), config.cloud_stopwords.end());
  const auto cloud = viz::cloud_weights(docs, config.top_k, extra);
  emit("cloud.json", viz::cloud_json(cloud));
  if (!cloud.entries.empty()) emit("cloud.svg", viz::cloud_svg(cloud));
  const auto dist = viz::sentiment_distribution(docs);
  emit("distribution.csv", viz::distribution_csv(dist));
  emit("distribution.svg", viz::distribution_svg(dist));
  m.write(layout.viz_dir());
  out << fmt::format("viz: wrote tables and charts to {}\n", layout.viz_dir().string());
}

std::vector<eval::ComparisonRow> cmd_compare(const PipelineConfig& config, std::span<const fs::path> report_paths,
                                             std::ostream& out) {
  const Layout layout{config.output_dir};
  std::vector<fs::path> paths(report_paths.begin(), report_paths.end());
  if (paths.empty()) {
    for (ModelKind kind : config.models) {
      const auto p = layout.eval_dir() / (std::string(to_string(kind)) + ".json");
      require_artifact(p, "compare", "eval");
      paths.push_back(p);
    }
  }
  std::vector<eval::NamedReport> reports;
  for (const auto& p : paths) {
    if (!fs::is_regular_file(p)) throw ValidationError(fmt::format("report '{}' not found", p.string()));
    reports.push_back(eval::report_from_json(read_text_file(p), p.string()));
  }
  const auto rows = eval::compare(reports);
  out << eval::comparison_text(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// Command line

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentiment pipeline for Indonesian social-media posts: ingest, review, label, train, eval, viz.", "senti"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "pipeline config file (key = value)")->required();
    sub->add_option("--set", sets, "override a config key, as key=value (repeatable)");
  };

  auto* ingest = app.add_subcommand("ingest", "read raw posts, dedupe, filter by keyword and verdicts");
  add_config(ingest);

  auto* review = app.add_subcommand("review", "step through records and record keep/drop or label decisions");
  add_config(review);
  std::string review_mode = "labels";
  std::string import_file;
  bool reset = false;
  review->add_option("--mode", review_mode, "relevance or labels")
      ->check(CLI::IsMember({"relevance", "labels"}));
  review->add_option("--import", import_file, "batch-import an edited worksheet (labels) or verdicts CSV (relevance)");
  review->add_flag("--reset", reset, "discard saved progress and decisions first");

  auto* label = app.add_subcommand("label", "lexicon bootstrap labeling plus review overrides");
  add_config(label);
  auto* train = app.add_subcommand("train", "split the labeled corpus and fit the configured models");
  add_config(train);
  std::vector<std::string> train_models;
  train->add_option("--model", train_models, "train only these models (repeatable)");
  auto* evaluate = app.add_subcommand("eval", "score every model on the test split and compare them");
  add_config(evaluate);
  auto* vizcmd = app.add_subcommand("viz", "n-gram tables, word-cloud weights and distribution charts");
  add_config(vizcmd);
  auto* compare = app.add_subcommand("compare", "print a comparison table of saved metrics reports");
  add_config(compare);
  std::vector<std::string> compare_paths;
  compare->add_option("reports", compare_paths, "report JSON files (default: eval/<model>.json)");
  auto* run = app.add_subcommand("run", "ingest, label, train, eval and viz in sequence");
  add_config(run);

  auto* gen = app.add_subcommand("gen-fixture", "write the synthetic separable corpus as JSONL");
  std::string gen_out;
  fixture::FixtureOptions gen_opts;
  gen->add_option("-o,--out", gen_out, "output JSONL path")->required();
  gen->add_option("--seed", gen_opts.seed, "generator seed");
  gen->add_option("--per-class", gen_opts.per_class, "documents per class");
  gen->add_option("--duplicates", gen_opts.duplicates, "extra duplicate posts");
  gen->add_option("--irrelevant", gen_opts.irrelevant, "extra off-topic posts");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      const auto corpus = fixture::generate(gen_opts);
      if (const auto parent = fs::path(gen_out).parent_path(); !parent.empty()) fs::create_directories(parent);
      corpus::write_jsonl(gen_out, corpus.raw);
      out << fmt::format("gen-fixture: {} posts ({} unique documents) written to {}\n", corpus.raw.size(),
                         corpus.documents.size(), gen_out);
      return 0;
    }

    std::map<std::string, std::string> overrides;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ValidationError(fmt::format("--set expects key=value, got '{}'", s));
      overrides[trim(std::string_view(s).substr(0, eq))] = trim(std::string_view(s).substr(eq + 1));
    }
    if (!train_models.empty()) overrides["models"] = join(train_models, ",");
    std::optional<std::string> env_out;
    if (const char* v = std::getenv(kOutputDirEnv)) env_out = std::string(v);
    const PipelineConfig config = load_config(config_path, overrides, env_out);

    if (ingest->parsed()) {
      cmd_ingest(config, out, err);
    } else if (review->parsed()) {
      const auto mode = review_mode == "relevance" ? ReviewMode::Relevance : ReviewMode::Labels;
      std::optional<fs::path> import_path;
      if (!import_file.empty()) import_path = import_file;
      cmd_review(config, mode, import_path, reset, in, out);
    } else if (label->parsed()) {
      cmd_label(config, out, err);
    } else if (train->parsed()) {
      cmd_train(config, out);
    } else if (evaluate->parsed()) {
      cmd_eval(config, out);
    } else if (vizcmd->parsed()) {
      cmd_viz(config, out);
    } else if (compare->parsed()) {
      std::vector<fs::path> paths(compare_paths.begin(), compare_paths.end());
      cmd_compare(config, paths, out);
    } else if (run->parsed()) {
      cmd_ingest(config, out, err);
      cmd_label(config, out, err);
      cmd_train(config, out);
      cmd_eval(config, out);
      cmd_viz(config, out);
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace senti::pipeline
