#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "senti/bow.hpp"

namespace senti::bow {

/// Multinomial naive Bayes over raw unigram counts with additive smoothing.
struct MnbModel {
  std::array<double, kNumClasses> class_log_prior{};
  /// [class][token]; each row exponentiates to a distribution over the vocabulary.
  std::array<std::vector<double>, kNumClasses> token_log_likelihood;
  double smoothing_alpha = 1.0;
};

struct MnbOptions {
  double alpha = 1.0;
  /// When false a class missing from the training data gets a prior of
  /// -infinity and is never predicted, instead of raising ValidationError.
  bool require_all_classes = true;
};

/// class_log_prior[c] = ln(n_c / N)
/// token_log_likelihood[c][t] = ln((count(t, c) + alpha) / (tokens(c) + alpha * V))
MnbModel mnb_train(std::span<const Document> train, const BowVocab& vocab, const MnbOptions& options = {});

/// Scores are class_log_prior + sum_t count(t) * token_log_likelihood;
/// out-of-vocabulary tokens contribute nothing.
Prediction mnb_predict(std::span<const std::string> tokens, const MnbModel& model, const BowVocab& vocab);
inline Prediction mnb_predict(const Document& doc, const MnbModel& model, const BowVocab& vocab) {
  return mnb_predict(doc.tokens, model, vocab);
}

void save_mnb(const std::filesystem::path& path, const MnbModel& model, const BowVocab& vocab);
std::pair<MnbModel, BowVocab> load_mnb(const std::filesystem::path& path);

}  // namespace senti::bow
