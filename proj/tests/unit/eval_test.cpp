#include <gtest/gtest.h>

#include <random>

#include "senti/eval.hpp"

namespace senti::eval {
namespace {

using L = SentimentLabel;

TEST(Confusion, MatchesPairCounting) {
  std::mt19937_64 rng(50);
  std::vector<L> truth, pred;
  for (int i = 0; i < 50; ++i) {
    truth.push_back(label_from_index(rng() % 3));
    pred.push_back(label_from_index(rng() % 3));
  }
  const auto cm = confusion(truth, pred);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t p = 0; p < 3; ++p) {
      std::uint64_t n = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) n += class_index(truth[i]) == t && class_index(pred[i]) == p;
      EXPECT_EQ(cm.counts[t][p], n);
    }
  }
  EXPECT_EQ(cm.total(), 50u);
}

TEST(Confusion, PerfectAndConstantPredictions) {
  const std::vector<L> truth{L::Negative, L::Positive, L::Neutral, L::Positive};
  auto cm = confusion(truth, truth);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t p = 0; p < 3; ++p)
      if (t != p) EXPECT_EQ(cm.counts[t][p], 0u);
  const std::vector<L> neg(4, L::Negative);
  cm = confusion(truth, neg);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(cm.counts[t][1], 0u);
    EXPECT_EQ(cm.counts[t][2], 0u);
  }
  EXPECT_THROW(confusion(truth, std::vector<L>(3, L::Negative)), ValidationError);
  EXPECT_THROW(confusion(std::vector<L>{}, std::vector<L>{}), ValidationError);
}

TEST(Metrics, WorkedCase) {
  ConfusionMatrix cm;
  cm.counts[0][0] = 8;  // TP for Negative
  cm.counts[1][0] = 2;  // FP
  cm.counts[0][1] = 4;  // FN
  cm.counts[2][2] = 5;
  const auto r = metrics(cm);
  const auto& n = r.per_class[0];
  EXPECT_EQ(n.true_positive, 8u);
  EXPECT_EQ(n.false_positive, 2u);
  EXPECT_EQ(n.false_negative, 4u);
  EXPECT_NEAR(n.precision, 0.8, 1e-12);
  EXPECT_NEAR(n.recall, 0.6667, 1e-4);
  EXPECT_NEAR(n.f_score, 16.0 / 22.0, 1e-9);
  EXPECT_EQ(n.support, 12u);
}

TEST(Metrics, DegenerateClass) {
  ConfusionMatrix cm;
  cm.counts[0][0] = 3;
  cm.counts[2][2] = 1;
  const auto r = metrics(cm);
  const auto& u = r.per_class[1];
  EXPECT_EQ(u.precision, 0.0);
  EXPECT_EQ(u.recall, 0.0);
  EXPECT_EQ(u.f_score, 0.0);
  EXPECT_TRUE(u.precision_undefined && u.recall_undefined && u.f_undefined);
  EXPECT_EQ(r.per_class[0].f_score, 1.0);
  EXPECT_NEAR(r.macro_f, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_THROW(metrics(ConfusionMatrix{}), ValidationError);
}

TEST(Metrics, BoundedAndConsistentOnRandomMatrices) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 2000; ++i) {
    ConfusionMatrix cm;
    for (auto& row : cm.counts)
      for (auto& x : row) x = rng() % 6;
    if (cm.total() == 0) continue;
    const auto r = metrics(cm);
    for (const auto& c : r.per_class) {
      for (double v : {c.precision, c.recall, c.f_score}) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
      const auto denom = 2 * c.true_positive + c.false_positive + c.false_negative;
      EXPECT_EQ(c.f_score, denom ? 2.0 * static_cast<double>(c.true_positive) / static_cast<double>(denom) : 0.0);
    }
  }
}

NamedReport named(std::string name, double f) {
  NamedReport r;
  r.name = std::move(name);
  r.report.macro_f = f;
  return r;
}

TEST(Compare, SortsByMacroF) {
  std::vector<NamedReport> reports{named("svm", 0.70), named("bert", 0.84), named("mnb", 0.83)};
  const auto rows = compare(reports);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].name, "bert");
  EXPECT_EQ(rows[1].name, "mnb");
  EXPECT_EQ(rows[2].name, "svm");
  std::vector<NamedReport> tie{named("a", 0.5), named("b", 0.5)};
  EXPECT_EQ(compare(tie)[0].name, "a");
  EXPECT_THROW(compare(std::span<const NamedReport>(reports.data(), 1)), ValidationError);
  const auto csv = comparison_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,macro_precision,macro_recall,macro_f,accuracy");
  EXPECT_NE(csv.find("bert,0.000000,0.000000,0.840000,0.000000"), std::string::npos) << csv;
  EXPECT_NE(comparison_text(rows).find("bert"), std::string::npos);
}

TEST(ReportJson, RoundTrip) {
  ConfusionMatrix cm;
  cm.counts = {{{5, 1, 0}, {2, 3, 1}, {0, 0, 4}}};
  NamedReport r{"mnb", metrics(cm)};
  const auto text = report_json(r);
  const auto back = report_from_json(text, "mnb.json");
  EXPECT_EQ(back.name, "mnb");
  EXPECT_EQ(back.report, r.report);
  EXPECT_THROW(report_from_json("{", "broken.json"), ValidationError);
  EXPECT_THROW(report_from_json("{\"model\":\"x\"}", "partial.json"), ValidationError);
}

}  // namespace
}  // namespace senti::eval
