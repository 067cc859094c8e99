#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "senti/common.hpp"

namespace senti::bow {

/// Unigram vocabulary over a training split. Index order is by descending
/// corpus count, ties broken lexicographically.
struct BowVocab {
  std::unordered_map<std::string, std::size_t> token_to_index;
  std::vector<std::string> tokens;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> document_frequency;
  std::size_t num_documents = 0;

  std::size_t size() const { return tokens.size(); }
  std::optional<std::size_t> index_of(const std::string& token) const;
};

/// Tokens occurring fewer than `min_count` times in total are left out.
/// Throws ValidationError on an empty training set or min_count == 0.
BowVocab build_vocab(std::span<const Document> train, std::size_t min_count = 1);

nlohmann::json vocab_to_json(const BowVocab& vocab);
BowVocab vocab_from_json(const nlohmann::json& j);

enum class FeatureMode { Tf, TfIdf };
std::string_view to_string(FeatureMode mode);
std::optional<FeatureMode> parse_feature_mode(std::string_view text);

/// Entries sorted by index, no duplicates, no explicit zeros.
struct SparseVector {
  std::vector<std::pair<std::size_t, double>> entries;

  bool empty() const { return entries.empty(); }
  double dot(std::span<const double> dense) const;
  double squared_norm() const;
  SparseVector scaled(double k) const;
};

/// Smoothed inverse document frequency ln((1 + N) / (1 + df)) + 1.
double idf(const BowVocab& vocab, std::size_t index);

/// Tf gives raw counts; TfIdf multiplies counts by idf and L2-normalizes.
/// Out-of-vocabulary tokens are ignored.
SparseVector vectorize(std::span<const std::string> tokens, const BowVocab& vocab, FeatureMode mode);
inline SparseVector vectorize(const Document& doc, const BowVocab& vocab, FeatureMode mode) {
  return vectorize(doc.tokens, vocab, mode);
}

/// Label and per-class scores (log-scores or margins).
struct Prediction {
  SentimentLabel label = SentimentLabel::Negative;
  std::array<double, kNumClasses> scores{};
};

/// All training documents must carry labels; throws ValidationError otherwise.
std::vector<SentimentLabel> require_labels(std::span<const Document> docs);

inline constexpr std::string_view kModelMagic = "senti-model";
inline constexpr int kModelVersion = 1;

}  // namespace senti::bow
