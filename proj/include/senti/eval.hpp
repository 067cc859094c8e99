#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "senti/common.hpp"

namespace senti::eval {

/// counts[true][predicted].
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

  std::uint64_t total() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Throws ValidationError on a length mismatch or empty input.
ConfusionMatrix confusion(std::span<const SentimentLabel> truth, std::span<const SentimentLabel> predicted);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  // Set when the matching denominator is zero; the metric is then 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_undefined = false;
  std::uint64_t true_positive = 0;
  std::uint64_t false_positive = 0;
  std::uint64_t false_negative = 0;
  std::uint64_t support = 0;

  bool operator==(const ClassMetrics&) const = default;
};

struct MetricsReport {
  std::array<ClassMetrics, kNumClasses> per_class{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix matrix;

  bool operator==(const MetricsReport&) const = default;
};

/// One-vs-rest per class: precision TP/(TP+FP), recall TP/(TP+FN),
/// F 2TP/(2TP+FP+FN); macro values are unweighted means over the three
/// classes. Throws ValidationError on an all-zero matrix.
MetricsReport metrics(const ConfusionMatrix& cm);

struct NamedReport {
  std::string name;
  MetricsReport report;
};

struct ComparisonRow {
  std::string name;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  double accuracy = 0.0;
};

/// Rows sorted by macro F descending; equal scores keep input order.
/// Throws ValidationError for fewer than two reports.
std::vector<ComparisonRow> compare(std::span<const NamedReport> reports);

/// model,macro_precision,macro_recall,macro_f,accuracy
std::string comparison_csv(std::span<const ComparisonRow> rows);
/// Fixed-width columns for the terminal.
std::string comparison_text(std::span<const ComparisonRow> rows);
/// Full per-class detail plus the matrix, as pretty-printed JSON.
std::string report_json(const NamedReport& report);
/// Reads report_json output back. Throws ValidationError naming `source`.
NamedReport report_from_json(std::string_view text, std::string_view source);

}  // namespace senti::eval
