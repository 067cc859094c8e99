#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "senti/common.hpp"
#include "senti/encoder/config.hpp"
#include "senti/encoder/model.hpp"
#include "senti/encoder/params.hpp"
#include "senti/encoder/token_vocab.hpp"

namespace senti::encoder {

/// Loss and accuracy of one epoch. Both splits are measured with an
/// eval-mode pass over the whole split after the epoch's last update.
struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> validation_loss;
  std::optional<double> validation_accuracy;

  bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
  EncoderParams params;
  std::vector<EpochStats> history;
};

struct SplitScore {
  double mean_loss = 0.0;
  double accuracy = 0.0;
};

/// Eval-mode mean cross-entropy and accuracy in document order.
SplitScore evaluate_split(std::span<const Document> documents, const EncoderParams& params, const TokenVocab& vocab,
                          const EncoderConfig& config);

/// Mini-batch Adam on mean cross-entropy. Batch order comes from a
/// shuffle seeded by profile.seed; dropout draws from its own stream so
/// the batch order does not depend on the dropout rate. When `initial`
/// is empty the weights are initialized from profile.seed. Throws
/// DivergenceError with epoch and step on a non-finite loss or update.
TrainResult fine_tune(std::span<const Document> train, std::span<const Document> validation, const TokenVocab& vocab,
                      const EncoderConfig& config, const TrainProfile& profile,
                      std::optional<EncoderParams> initial = std::nullopt,
                      const std::function<void(const EpochStats&)>& on_epoch = {});

/// epoch,train_loss,train_acc,val_loss,val_acc followed by the profile's
/// batch_size,epochs,learning_rate repeated on every row.
void write_history_csv(const std::filesystem::path& path, std::span<const EpochStats> history,
                       const TrainProfile& profile);

}  // namespace senti::encoder
