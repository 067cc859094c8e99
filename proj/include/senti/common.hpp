#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace senti {

/// Three-way sentiment class. The integer codes are part of every file
/// format and also define the tie-breaking order of all argmax decisions.
enum class SentimentLabel : std::uint8_t { Negative = 0, Neutral = 1, Positive = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<SentimentLabel, kNumClasses> kAllLabels{
    SentimentLabel::Negative, SentimentLabel::Neutral, SentimentLabel::Positive};

constexpr std::size_t class_index(SentimentLabel label) { return static_cast<std::size_t>(label); }
constexpr SentimentLabel label_from_index(std::size_t i) { return static_cast<SentimentLabel>(i); }

std::string_view to_string(SentimentLabel label);

/// Highest score wins; ties go to the lowest label code.
SentimentLabel argmax_label(const std::array<double, kNumClasses>& scores);
/// Accepts "negative"/"neutral"/"positive" (any case), their first letters, or the codes 0/1/2.
std::optional<SentimentLabel> parse_label(std::string_view text);

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// RFC 3339 with a 'Z' or numeric offset; fractional seconds optional.
std::optional<Timestamp> parse_rfc3339(std::string_view text);
/// Always UTC with 'Z'; milliseconds are written only when non-zero.
std::string format_rfc3339(Timestamp t);

/// One raw collected post.
struct TweetRecord {
  std::string id;
  std::string text;
  std::optional<Timestamp> created_at;
  std::vector<std::string> matched_keywords;

  bool operator==(const TweetRecord&) const = default;
};

/// Cleaned and tokenized text, the unit that flows through labeling,
/// training and evaluation.
struct Document {
  std::string id;
  std::string raw_text;
  std::string clean_text;
  std::vector<std::string> tokens;
  std::optional<SentimentLabel> label;

  bool operator==(const Document&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input detected before any work is done (bad config, missing file, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A problem tied to one line of an input file.
struct LineError {
  std::size_t line = 0;
  std::string message;

  bool operator==(const LineError&) const = default;
};

// Small text helpers shared by several modules. ASCII-only case folding:
// multibyte UTF-8 sequences pass through untouched.
std::string ascii_lower(std::string_view text);
std::string trim(std::string_view text);
std::string collapse_whitespace(std::string_view text);
bool is_space(char c);
std::vector<std::string> split_whitespace(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Whole-file helpers; both throw Error naming the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace senti
