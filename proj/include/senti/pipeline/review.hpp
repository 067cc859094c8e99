#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace senti::pipeline {

enum class ReviewMode { Relevance, Labels };

std::string_view to_string(ReviewMode mode);

/// One record shown to the reviewer. `proposed` is the automatic decision:
/// "keep" in relevance mode, a label name in labels mode.
struct ReviewItem {
  std::string id;
  std::string text;
  std::string proposed;
};

/// Decisions so far, in item order. The checksum in the serialized form
/// covers every other field; `source_sha256` identifies the item list the
/// decisions belong to.
struct ReviewProgress {
  ReviewMode mode = ReviewMode::Relevance;
  std::string source_sha256;
  std::vector<std::pair<std::string, std::string>> decisions;  // id, decision

  bool operator==(const ReviewProgress&) const = default;
};

std::string progress_to_json(const ReviewProgress& progress);
/// Throws ValidationError naming `source` when the checksum does not match
/// or the JSON is malformed.
ReviewProgress progress_from_json(std::string_view text, std::string_view source);

struct ReviewOutcome {
  std::size_t reviewed = 0;  // decisions recorded, including earlier sessions
  std::size_t total = 0;
  bool finished() const { return reviewed == total; }
};

/// Steps through `items` from the first undecided one. Every decision is
/// written to `progress_path` and folded into `output_path` immediately, so
/// an interrupted session loses nothing. 'q' or end of input stops early.
/// Relevance output is a verdicts CSV holding the drops; labels output is
/// an overrides CSV holding labels that differ from the proposal.
ReviewOutcome run_review(ReviewMode mode, std::span<const ReviewItem> items, const std::string& source_sha256,
                         const std::filesystem::path& progress_path, const std::filesystem::path& output_path,
                         std::istream& in, std::ostream& out);

/// Batch route. Labels mode reads an edited worksheet CSV (final_label
/// column); relevance mode reads an id,verdict CSV. Writes the same output
/// file that interactive entry of those decisions would, and a completed
/// progress file. Unknown ids are a ValidationError.
ReviewOutcome import_review(ReviewMode mode, std::span<const ReviewItem> items, const std::string& source_sha256,
                            const std::filesystem::path& import_path, const std::filesystem::path& progress_path,
                            const std::filesystem::path& output_path);

}  // namespace senti::pipeline
