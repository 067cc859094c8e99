#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "senti/eval.hpp"
#include "senti/pipeline/config.hpp"
#include "senti/pipeline/review.hpp"

namespace senti::pipeline {

/// Where each stage reads and writes, relative to the output directory.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path ingest_dir() const { return root / "ingest"; }
  std::filesystem::path candidates() const { return ingest_dir() / "candidates.jsonl"; }
  std::filesystem::path corpus() const { return ingest_dir() / "corpus.jsonl"; }
  std::filesystem::path review_dir() const { return root / "review"; }
  std::filesystem::path verdicts() const { return review_dir() / "verdicts.csv"; }
  std::filesystem::path label_overrides() const { return review_dir() / "label_overrides.csv"; }
  std::filesystem::path label_dir() const { return root / "label"; }
  std::filesystem::path documents() const { return label_dir() / "documents.jsonl"; }
  std::filesystem::path worksheet() const { return label_dir() / "worksheet.csv"; }
  std::filesystem::path train_dir() const { return root / "train"; }
  std::filesystem::path split() const { return train_dir() / "split.csv"; }
  std::filesystem::path mnb_model() const { return train_dir() / "mnb.json"; }
  std::filesystem::path svm_model() const { return train_dir() / "svm.json"; }
  std::filesystem::path bert_dir() const { return train_dir() / "bert"; }
  std::filesystem::path eval_dir() const { return root / "eval"; }
  std::filesystem::path viz_dir() const { return root / "viz"; }
};

/// Labeled documents as JSON lines: id, raw_text, clean_text, tokens, label.
void write_documents(const std::filesystem::path& path, std::span<const Document> docs);
std::vector<Document> read_documents(const std::filesystem::path& path);

// Each stage validates that its predecessors' artifacts exist before it
// writes anything, and finishes by writing <stage>/manifest.json.
void cmd_ingest(const PipelineConfig& config, std::ostream& out, std::ostream& err);
ReviewOutcome cmd_review(const PipelineConfig& config, ReviewMode mode,
                         const std::optional<std::filesystem::path>& import_path, bool reset, std::istream& in,
                         std::ostream& out);
void cmd_label(const PipelineConfig& config, std::ostream& out, std::ostream& err);
void cmd_train(const PipelineConfig& config, std::ostream& out);
void cmd_eval(const PipelineConfig& config, std::ostream& out);
void cmd_viz(const PipelineConfig& config, std::ostream& out);
/// Compares saved reports; with no paths, every report under eval/.
std::vector<eval::ComparisonRow> cmd_compare(const PipelineConfig& config,
                                             std::span<const std::filesystem::path> report_paths, std::ostream& out);

/// Full command line in-process. Returns 0 on success, 1 on validation
/// errors (bad config or arguments, missing stage artifacts), 2 on runtime
/// failures.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace senti::pipeline
