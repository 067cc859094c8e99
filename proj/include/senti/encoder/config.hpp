#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "senti/kv.hpp"

namespace senti::encoder {

/// Shape hyperparameters of the transformer classifier.
struct EncoderConfig {
  std::size_t num_layers = 2;
  std::size_t num_heads = 4;
  std::size_t hidden_size = 64;
  std::size_t feedforward_size = 128;
  std::size_t max_sequence_length = 64;
  std::size_t vocab_size = 0;
  double dropout_rate = 0.1;
  std::size_t num_classes = 3;

  std::size_t head_size() const { return hidden_size / num_heads; }

  /// Throws ValidationError on D % H != 0, zero sizes, dropout outside [0,1),
  /// S < 3 or num_classes != 3.
  void validate() const;

  /// BERT-base shape: 12 layers, 12 heads, hidden 768, feedforward 3072.
  static EncoderConfig paper();
  /// 2 layers, 4 heads, hidden 64, feedforward 128, sequence 64.
  static EncoderConfig desk();
  /// "paper" or "desk"; throws ValidationError otherwise.
  static EncoderConfig named(std::string_view name);

  bool operator==(const EncoderConfig&) const = default;
};

/// Optimizer and schedule settings for fine-tuning.
struct TrainProfile {
  std::string name = "desk";
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;

  /// batch 32, 10 epochs, Adam learning rate 3e-6.
  static TrainProfile paper();
  /// Same schedule with learning rate 1e-3, which a randomly initialized
  /// model needs to converge within 10 epochs.
  static TrainProfile desk();
  static TrainProfile named(std::string_view name);

  /// Overlays `prefix`batch_size, epochs, learning_rate, adam_beta1,
  /// adam_beta2, adam_epsilon and seed keys found in `doc`.
  void apply_overrides(const kv::Document& doc, const std::string& prefix);

  /// key = value text that from_text reads back exactly.
  std::string to_text() const;
  static TrainProfile from_text(std::string_view text);

  bool operator==(const TrainProfile&) const = default;
};

}  // namespace senti::encoder
