#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "senti/common.hpp"

namespace senti::lexicon {

/// Raised when a phrase is listed as both positive and negative.
class LexiconOverlapError : public ValidationError {
 public:
  explicit LexiconOverlapError(std::vector<std::string> phrases);
  const std::vector<std::string>& phrases() const { return phrases_; }

 private:
  std::vector<std::string> phrases_;
};

/// Disjoint positive and negative phrase sets. Phrases are stored lowercased
/// with single spaces, so "dapat  Dipercaya" and "dapat dipercaya" coincide.
class LexiconDict {
 public:
  LexiconDict() = default;
  /// Normalizes and deduplicates; throws LexiconOverlapError on overlap.
  LexiconDict(std::span<const std::string> positive, std::span<const std::string> negative);

  const std::unordered_set<std::string>& positive() const { return positive_; }
  const std::unordered_set<std::string>& negative() const { return negative_; }
  /// Length in tokens of the longest phrase (0 for an empty dictionary).
  std::size_t max_phrase_tokens() const { return max_tokens_; }

  /// Swaps the two polarities.
  LexiconDict mirrored() const;

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
  std::size_t max_tokens_ = 0;
};

std::string normalize_phrase(std::string_view phrase);

/// One phrase per line; blank lines and lines starting with '#' are ignored.
LexiconDict load_lexicon(const std::filesystem::path& positive_path, const std::filesystem::path& negative_path);

struct LexiconVerdict {
  int score = 0;
  SentimentLabel label = SentimentLabel::Neutral;
  std::vector<std::string> matched_positive;
  std::vector<std::string> matched_negative;
};

/// Sign rule: > 0 positive, < 0 negative, 0 neutral.
SentimentLabel label_for_score(int score);

/// Greedy longest-match scan from the left. A token consumed by a phrase is
/// not matched again; every match contributes +1 or -1, repeats included.
LexiconVerdict score_document(std::span<const std::string> tokens, const LexiconDict& dict);

using LabelOverrides = std::map<std::string, SentimentLabel>;

struct WorksheetRow {
  std::string id;
  std::string clean_text;
  int score = 0;
  SentimentLabel proposed_label = SentimentLabel::Neutral;
  SentimentLabel final_label = SentimentLabel::Neutral;

  bool operator==(const WorksheetRow&) const = default;
};

struct LabelingResult {
  std::vector<Document> documents;
  std::vector<WorksheetRow> worksheet;
  std::vector<std::string> unknown_override_ids;
};

/// Labels every document by its lexicon score, then applies human overrides.
LabelingResult label_corpus(std::span<const Document> documents, const LexiconDict& dict,
                            const LabelOverrides* overrides = nullptr);

/// CSV: id, clean_text, score, proposed_label, final_label.
void write_worksheet(const std::filesystem::path& path, std::span<const WorksheetRow> rows);
std::vector<WorksheetRow> read_worksheet(const std::filesystem::path& path);

/// CSV: id, label.
LabelOverrides load_label_overrides(const std::filesystem::path& path);
void save_label_overrides(const std::filesystem::path& path, const LabelOverrides& overrides);

}  // namespace senti::lexicon
