#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "senti/common.hpp"

namespace senti::viz {

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

struct NgramEntry {
  std::vector<std::string> gram;
  std::uint64_t count = 0;

  bool operator==(const NgramEntry&) const = default;
};

/// Sorted by count descending, then gram lexicographically.
struct NgramTable {
  std::size_t n = 1;
  std::vector<NgramEntry> entries;
};

/// Sliding windows inside each document; grams never span documents. An n
/// longer than every document gives an empty table. Throws ValidationError
/// for n == 0.
NgramTable ngrams(std::span<const Document> documents, std::size_t n, std::size_t top_k = kNoLimit);

struct CloudEntry {
  std::string word;
  std::uint64_t count = 0;

  bool operator==(const CloudEntry&) const = default;
};

/// Top-K unigram counts, in the same order as an n=1 table.
struct CloudWeights {
  std::vector<CloudEntry> entries;
};

CloudWeights cloud_weights(std::span<const Document> documents, std::size_t top_k,
                           const std::unordered_set<std::string>& extra_stopwords = {});

using Distribution = std::array<std::uint64_t, kNumClasses>;

/// Throws ValidationError naming the first unlabeled document.
Distribution sentiment_distribution(std::span<const Document> documents);

/// gram,count with the gram's tokens space-separated.
std::string ngram_csv(const NgramTable& table);
/// {"word": count, ...} in rank order.
std::string cloud_json(const CloudWeights& weights);
/// label,count
std::string distribution_csv(const Distribution& dist);

// SVG renderers. Output depends only on the input, so identical input gives
// identical bytes. Each throws ValidationError on empty input and Error when
// the file cannot be written.
std::string ngram_svg(const NgramTable& table);
std::string distribution_svg(const Distribution& dist);
/// Words in rank order laid out in rows; font size grows linearly with count.
std::string cloud_svg(const CloudWeights& weights);

}  // namespace senti::viz
