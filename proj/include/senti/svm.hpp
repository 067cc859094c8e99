#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "senti/bow.hpp"

namespace senti::bow {

struct SvmConfig {
  double lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
  FeatureMode feature_mode = FeatureMode::TfIdf;
};

/// Three one-vs-rest linear separators. The bias is trained as a weight on
/// a constant feature and is regularized with the rest.
struct SvmModel {
  std::array<std::vector<double>, kNumClasses> weights;
  std::array<double, kNumClasses> bias{};
  double lambda = 0.0;
  FeatureMode feature_mode = FeatureMode::TfIdf;
  /// lambda/2 * |w|^2 + mean hinge loss, at w = 0 and after training.
  std::array<double, kNumClasses> initial_objective{};
  std::array<double, kNumClasses> final_objective{};

  std::size_t dimension() const { return weights[0].size(); }
};

/// Pegasos: per epoch a seeded permutation of the samples; at step t the
/// rate is 1/(lambda t), the weights shrink by (1 - 1/t) and margin
/// violators are added, then w is projected onto the ball of radius
/// 1/sqrt(lambda). Needs at least two distinct labels.
SvmModel svm_train_features(std::span<const SparseVector> samples, std::span<const SentimentLabel> labels,
                            std::size_t dimension, const SvmConfig& config);

/// Vectorizes with config.feature_mode and trains.
SvmModel svm_train(std::span<const Document> train, const BowVocab& vocab, const SvmConfig& config);

/// Regularized hinge objective of class `c`'s separator on the given data.
double svm_objective(const SvmModel& model, std::size_t c, std::span<const SparseVector> samples,
                     std::span<const SentimentLabel> labels);

/// Scores are the margins w_c . x + b_c.
Prediction svm_predict_features(const SparseVector& x, const SvmModel& model);
Prediction svm_predict(std::span<const std::string> tokens, const SvmModel& model, const BowVocab& vocab);
inline Prediction svm_predict(const Document& doc, const SvmModel& model, const BowVocab& vocab) {
  return svm_predict(doc.tokens, model, vocab);
}

double weight_norm(const SvmModel& model);

void save_svm(const std::filesystem::path& path, const SvmModel& model, const BowVocab& vocab);
std::pair<SvmModel, BowVocab> load_svm(const std::filesystem::path& path);

}  // namespace senti::bow
