#include <gtest/gtest.h>

#include <random>

#include "senti/corpus.hpp"
#include "senti/fixture.hpp"
#include "senti/svm.hpp"
#include "test_util.hpp"

namespace senti::bow {
namespace {

using senti::testing::TempDir;

// Two clusters in the plane: Negative near (2.5, 0.5), Positive near (0.5, 2.5).
struct Toy {
  std::vector<SparseVector> x;
  std::vector<SentimentLabel> y;
};

SparseVector point(double a, double b) {
  SparseVector v;
  if (a != 0.0) v.entries.emplace_back(0, a);
  if (b != 0.0) v.entries.emplace_back(1, b);
  return v;
}

Toy separable() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Toy t;
  for (int i = 0; i < 40; ++i) {
    const bool neg = i % 2 == 0;
    const double a = u(rng), b = u(rng);
    t.x.push_back(neg ? point(2.0 + a, b) : point(a, 2.0 + b));
    t.y.push_back(neg ? SentimentLabel::Negative : SentimentLabel::Positive);
  }
  return t;
}

double train_accuracy(const Toy& t, const SvmModel& m) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < t.x.size(); ++i) ok += svm_predict_features(t.x[i], m).label == t.y[i];
  return static_cast<double>(ok) / static_cast<double>(t.x.size());
}

SvmConfig cfg(double lambda, std::size_t epochs = 50, std::uint64_t seed = 0) {
  SvmConfig c;
  c.lambda = lambda;
  c.epochs = epochs;
  c.seed = seed;
  return c;
}

TEST(Svm, SeparableToyReachesFullAccuracy) {
  const auto t = separable();
  auto m = svm_train_features(t.x, t.y, 2, cfg(1e-2));
  EXPECT_EQ(train_accuracy(t, m), 1.0);
  EXPECT_EQ(m.dimension(), 2u);
  EXPECT_EQ(svm_predict_features(point(10.0, 0.0), m).label, SentimentLabel::Negative);
  EXPECT_EQ(svm_predict_features(point(0.0, 10.0), m).label, SentimentLabel::Positive);
}

TEST(Svm, DoublingLambdaNeverGrowsTheNorm) {
  const auto t = separable();
  double prev = INFINITY;
  for (double lambda = 1e-3; lambda < 10.0; lambda *= 2) {
    const double norm = weight_norm(svm_train_features(t.x, t.y, 2, cfg(lambda)));
    EXPECT_LE(norm, prev + 1e-12) << "lambda " << lambda;
    prev = norm;
  }
}

TEST(Svm, HugeLambdaCollapsesWeights) {
  const auto t = separable();
  auto m = svm_train_features(t.x, t.y, 2, cfg(1e6));
  EXPECT_LT(weight_norm(m), 1e-2);
}

TEST(Svm, SameSeedSameWeights) {
  const auto t = separable();
  auto a = svm_train_features(t.x, t.y, 2, cfg(1e-2, 10, 5));
  auto b = svm_train_features(t.x, t.y, 2, cfg(1e-2, 10, 5));
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Svm, ObjectiveDecreasesOnAverage) {
  const auto t = separable();
  double initial = 0, final = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = svm_train_features(t.x, t.y, 2, cfg(1e-2, 5, seed));
    for (std::size_t c = 0; c < 3; ++c) {
      initial += m.initial_objective[c];
      final += m.final_objective[c];
      EXPECT_NEAR(svm_objective(m, c, t.x, t.y), m.final_objective[c], 1e-12);
    }
  }
  EXPECT_LT(final, initial);
}

TEST(Svm, PredictionContracts) {
  SvmModel m;
  m.weights = {std::vector<double>{1.0, -1.0}, std::vector<double>{0.0, 0.0}, std::vector<double>{-1.0, 2.0}};
  m.bias = {0.1, 0.5, 0.2};
  EXPECT_EQ(svm_predict_features(SparseVector{}, m).label, SentimentLabel::Neutral);
  m.bias = {0.0, 0.0, 0.0};
  EXPECT_EQ(svm_predict_features(SparseVector{}, m).label, SentimentLabel::Negative);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const auto x = point(u(rng), u(rng));
    const double k = 0.01 + std::abs(u(rng)) * 10;
    EXPECT_EQ(svm_predict_features(x, m).label, svm_predict_features(x.scaled(k), m).label);
  }
}

TEST(Svm, Errors) {
  const auto t = separable();
  std::vector<SentimentLabel> one(t.y.size(), SentimentLabel::Negative);
  EXPECT_THROW(svm_train_features(t.x, one, 2, cfg(1e-2)), ValidationError);
  EXPECT_THROW(svm_train_features(t.x, t.y, 2, cfg(0.0)), ValidationError);
  EXPECT_THROW(svm_train_features(t.x, t.y, 1, cfg(1e-2)), ValidationError);
}

corpus::Split fixture_split() {
  const auto docs = fixture::generate().documents;
  return corpus::split(docs, corpus::SplitSpec::reference_proportions(7, true));
}

TEST(Svm, FixtureOrderChangesFewTestPredictions) {
  auto s = fixture_split();
  auto v = build_vocab(s.train);
  SvmConfig c;
  auto m1 = svm_train(s.train, v, c);
  std::mt19937_64 rng(13);
  std::shuffle(s.train.begin(), s.train.end(), rng);
  auto m2 = svm_train(s.train, v, c);
  std::size_t differ = 0;
  for (const auto& d : s.test) differ += svm_predict(d, m1, v).label != svm_predict(d, m2, v).label;
  EXPECT_LE(static_cast<double>(differ), 0.10 * static_cast<double>(s.test.size()));
}

TEST(Svm, SaveLoadRoundTrip) {
  TempDir dir;
  auto s = fixture_split();
  auto v = build_vocab(s.train);
  auto m = svm_train(s.train, v, SvmConfig{});
  save_svm(dir.path() / "s.json", m, v);
  auto [m2, v2] = load_svm(dir.path() / "s.json");
  EXPECT_EQ(m2.weights, m.weights);
  EXPECT_EQ(m2.bias, m.bias);
  EXPECT_EQ(m2.feature_mode, m.feature_mode);
  EXPECT_EQ(v2.tokens, v.tokens);
  for (const auto& d : s.test) EXPECT_EQ(svm_predict(d, m2, v2).label, svm_predict(d, m, v).label);
}

}  // namespace
}  // namespace senti::bow
