#include "senti/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <json.hpp>

#include "senti/kv.hpp"

namespace senti::eval {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

ConfusionMatrix confusion(std::span<const SentimentLabel> truth, std::span<const SentimentLabel> predicted) {
  if (truth.size() != predicted.size()) {
    throw ValidationError(
        fmt::format("label lists differ in length ({} true vs {} predicted)", truth.size(), predicted.size()));
  }
  if (truth.empty()) throw ValidationError("cannot build a confusion matrix from zero labels");
  ConfusionMatrix cm;
  for (std::size_t k = 0; k < truth.size(); ++k) ++cm.counts[class_index(truth[k])][class_index(predicted[k])];
  return cm;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw ValidationError("cannot compute metrics of an empty confusion matrix");
  MetricsReport r;
  r.matrix = cm;
  std::uint64_t correct = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::uint64_t row = 0, col = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      row += cm.counts[c][k];
      col += cm.counts[k][c];
    }
    ClassMetrics& m = r.per_class[c];
    m.true_positive = cm.counts[c][c];
    m.false_positive = col - m.true_positive;
    m.false_negative = row - m.true_positive;
    m.support = row;
    m.precision = ratio(m.true_positive, m.true_positive + m.false_positive, m.precision_undefined);
    m.recall = ratio(m.true_positive, m.true_positive + m.false_negative, m.recall_undefined);
    m.f_score = ratio(2 * m.true_positive, 2 * m.true_positive + m.false_positive + m.false_negative, m.f_undefined);
    correct += m.true_positive;
  }
  for (const auto& m : r.per_class) {
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f += m.f_score;
  }
  r.macro_precision /= static_cast<double>(kNumClasses);
  r.macro_recall /= static_cast<double>(kNumClasses);
  r.macro_f /= static_cast<double>(kNumClasses);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return r;
}

std::vector<ComparisonRow> compare(std::span<const NamedReport> reports) {
  if (reports.size() < 2) throw ValidationError("a comparison needs at least two model reports");
  std::vector<ComparisonRow> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) {
    rows.push_back({r.name, r.report.macro_precision, r.report.macro_recall, r.report.macro_f, r.report.accuracy});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.macro_f > b.macro_f; });
  return rows;
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::string out = "model,macro_precision,macro_recall,macro_f,accuracy\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.name, r.macro_precision, r.macro_recall, r.macro_f,
                       r.accuracy);
  }
  return out;
}

std::string comparison_text(std::span<const ComparisonRow> rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  std::string out = fmt::format("{:<{}}  {:>9}  {:>9}  {:>9}  {:>9}\n", "model", width, "precision", "recall",
                                "f1", "accuracy");
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:>9.4f}  {:>9.4f}  {:>9.4f}  {:>9.4f}\n", r.name, width, r.macro_precision,
                       r.macro_recall, r.macro_f, r.accuracy);
  }
  return out;
}

std::string report_json(const NamedReport& named) {
  const MetricsReport& r = named.report;
  nlohmann::ordered_json j;
  j["model"] = named.name;
  j["accuracy"] = r.accuracy;
  j["macro"] = {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f_score", r.macro_f}};
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const ClassMetrics& m = r.per_class[c];
    nlohmann::ordered_json e;
    e["precision"] = m.precision;
    e["recall"] = m.recall;
    e["f_score"] = m.f_score;
    e["support"] = m.support;
    e["true_positive"] = m.true_positive;
    e["false_positive"] = m.false_positive;
    e["false_negative"] = m.false_negative;
    e["undefined"] = {{"precision", m.precision_undefined}, {"recall", m.recall_undefined},
                      {"f_score", m.f_undefined}};
    classes[std::string(to_string(label_from_index(c)))] = std::move(e);
  }
  j["classes"] = std::move(classes);
  j["confusion_matrix"] = r.matrix.counts;
  return j.dump(2) + "\n";
}

NamedReport report_from_json(std::string_view text, std::string_view source) {
  try {
    const auto j = nlohmann::json::parse(text);
    NamedReport named;
    named.name = j.at("model").get<std::string>();
    ConfusionMatrix cm;
    cm.counts = j.at("confusion_matrix").get<decltype(cm.counts)>();
    // Everything else is derived; recomputing keeps one source of truth.
    named.report = metrics(cm);
    return named;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: not a metrics report ({})", source, e.what()));
  }
}

}  // namespace senti::eval
