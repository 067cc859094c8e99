#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "senti/common.hpp"

namespace senti::corpus {

enum class RecordFormat { Jsonl, Csv };

/// Picks the format from the file extension (.jsonl/.json/.ndjson or .csv).
std::optional<RecordFormat> format_from_path(const std::filesystem::path& path);
std::optional<RecordFormat> parse_format(std::string_view name);

enum class KeywordMatch { Any, All };

/// The configured keywords (lowercased) that occur in `text`, case-insensitively,
/// in configuration order.
std::vector<std::string> matched_keywords(std::string_view text, std::span<const std::string> keywords);

struct IngestResult {
  std::vector<TweetRecord> records;
  std::vector<LineError> errors;
  std::size_t rows_read = 0;
};

/// Streams records one row at a time. Rows that fail to parse, lack an id or
/// text, or repeat an earlier id are reported through `on_error` and not
/// passed to `on_record`. Throws ValidationError when the file is missing.
void for_each_record(const std::filesystem::path& path, RecordFormat format,
                     const std::function<void(TweetRecord&&, std::size_t line)>& on_record,
                     const std::function<void(LineError&&)>& on_error);

/// Reads the whole file in file order. When `keywords` is non-empty each
/// record's matched_keywords is filled in.
IngestResult ingest_file(const std::filesystem::path& path, RecordFormat format,
                         std::span<const std::string> keywords = {});

/// One canonical JSON object per line, keys in fixed order.
void write_jsonl(const std::filesystem::path& path, std::span<const TweetRecord> records);

// ---------------------------------------------------------------------------
// Duplicate and relevance triage

enum class DedupeKey { Id, NormalizedText };

/// Lowercased with whitespace runs collapsed to single spaces and trimmed.
std::string normalize_for_dedupe(std::string_view text);

struct DedupeResult {
  std::vector<TweetRecord> kept;
  std::vector<TweetRecord> removed;
};

/// Keeps the first occurrence of each key; both outputs preserve input order.
DedupeResult dedupe(std::span<const TweetRecord> records, DedupeKey key = DedupeKey::NormalizedText);

enum class Verdict { Keep, Drop };
using VerdictMap = std::map<std::string, Verdict>;

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view text);

/// CSV with header `id,verdict`.
VerdictMap load_verdicts(const std::filesystem::path& path);
void save_verdicts(const std::filesystem::path& path, const VerdictMap& verdicts);

struct RelevanceResult {
  std::vector<TweetRecord> kept;
  std::size_t dropped_by_keyword = 0;
  std::size_t dropped_by_verdict = 0;
  std::size_t kept_by_verdict = 0;
  /// Verdict entries whose id is not among the input records.
  std::vector<std::string> unknown_verdict_ids;
};

/// Keyword containment test, overridden per record by `verdicts`. The kept
/// records carry their matched_keywords. Throws ValidationError on an empty
/// keyword list.
RelevanceResult filter_relevant(std::span<const TweetRecord> records, std::span<const std::string> keywords,
                                const VerdictMap* verdicts = nullptr, KeywordMatch mode = KeywordMatch::Any);

// ---------------------------------------------------------------------------
// Splitting

/// Exact non-negative rational.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Accepts "a/b" or a plain decimal such as "0.8".
  static Fraction parse(std::string_view text);
  std::string str() const;

  bool operator==(const Fraction&) const = default;
};

struct SplitSpec {
  Fraction train{8, 10};
  Fraction validation{1, 10};
  Fraction test{1, 10};
  std::uint64_t seed = 0;
  bool stratified = false;

  /// Throws ValidationError unless each fraction is in [0,1] and they sum to 1 within 1e-9.
  void validate() const;

  /// The 4877 / 293 / 145 proportions of the reference 5,315-document corpus.
  static SplitSpec reference_proportions(std::uint64_t seed = 0, bool stratified = false);
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;

  bool operator==(const SplitSizes&) const = default;
};

/// Validation and test get floor(fraction * n); the remainder goes to train.
SplitSizes split_sizes(std::size_t n, const SplitSpec& spec);

struct Split {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
};

/// Seeded shuffle, then bucket: the first sizes.train shuffled positions go to
/// train, the next to validation, the rest to test. Each bucket keeps input
/// order. In stratified mode every class is shuffled and bucketed on its own,
/// which requires all documents to be labeled.
Split split(std::span<const Document> documents, const SplitSpec& spec);

}  // namespace senti::corpus
