#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "senti/svm.hpp"
#include "senti/corpus.hpp"
#include "senti/encoder/config.hpp"
#include "senti/kv.hpp"

namespace senti::pipeline {

/// Environment variable that replaces the configured output directory.
inline constexpr const char* kOutputDirEnv = "SENTI_OUTPUT_DIR";

enum class ModelKind { Lexicon, Mnb, Svm, Bert };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// Everything a pipeline run needs, fully type-checked. Relative paths in
/// the file are resolved against the file's directory.
struct PipelineConfig {
  std::filesystem::path source;  // the config file itself
  std::filesystem::path corpus;
  corpus::RecordFormat corpus_format = corpus::RecordFormat::Jsonl;
  std::filesystem::path positive_lexicon;
  std::filesystem::path negative_lexicon;
  std::filesystem::path stopwords;
  std::filesystem::path output_dir;
  std::vector<std::string> keywords;
  corpus::KeywordMatch keyword_match = corpus::KeywordMatch::Any;
  corpus::DedupeKey dedupe_key = corpus::DedupeKey::NormalizedText;
  bool skip_bad_rows = false;
  std::optional<std::filesystem::path> verdicts;         // default: review output
  std::optional<std::filesystem::path> label_overrides;  // default: review output
  corpus::SplitSpec split;
  std::vector<ModelKind> models;
  std::size_t vocab_min_count = 1;
  double mnb_alpha = 1.0;
  bow::SvmConfig svm;  // seed follows `seed` unless svm.seed is set
  std::string encoder_name = "desk";
  encoder::EncoderConfig encoder;  // vocab_size filled at training time
  encoder::TrainProfile profile;
  std::size_t top_k = 20;
  std::vector<std::size_t> ngram_sizes{1, 2};
  std::vector<std::string> cloud_stopwords;
  std::uint64_t seed = 0;
  /// Canonical text of every setting that shapes outputs, hashed into
  /// manifests. Excludes output_dir so relocated runs hash the same.
  std::string canonical_text;
};

/// Parses and validates in one go: unknown keys, bad values and missing
/// input files all raise ValidationError before anything is written.
/// `overrides` are key=value pairs applied on top of the file; a non-empty
/// `output_dir_override` (normally from SENTI_OUTPUT_DIR) wins over both.
PipelineConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides = {},
                           const std::optional<std::string>& output_dir_override = std::nullopt);

/// Keys accepted by load_config, for documentation and error messages.
const std::vector<std::string>& known_keys();

}  // namespace senti::pipeline
