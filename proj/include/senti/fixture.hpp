#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "senti/common.hpp"

namespace senti::fixture {

/// Word pools of the synthetic corpus. The class pools are pairwise
/// disjoint: positive words come from the bundled positive lexicon,
/// negative words from the negative lexicon and neutral words from neither,
/// so lexicon labeling recovers the generating class exactly.
struct WordPools {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> neutral;
  /// Shared topical words present in every class.
  std::vector<std::string> shared;
  /// Function words that the bundled stopword list removes.
  std::vector<std::string> glue;
};

const WordPools& word_pools();

struct FixtureOptions {
  std::size_t per_class = 200;
  std::uint64_t seed = 2021;
  /// Extra raw records repeating an earlier text under a new id.
  std::size_t duplicates = 24;
  /// Extra raw records with no topical keyword.
  std::size_t irrelevant = 36;
};

struct Corpus {
  /// Labeled documents with the tokens the preprocessing stage should
  /// produce, in raw order. Normalized texts are unique.
  std::vector<Document> documents;
  /// Raw posts: the documents' texts decorated with URLs, mentions,
  /// hashtags, case changes and stopwords, interleaved with duplicates
  /// and off-topic posts. Every kept post mentions "ppkm" or "jakarta".
  std::vector<TweetRecord> raw;
};

Corpus generate(const FixtureOptions& options = {});

}  // namespace senti::fixture
