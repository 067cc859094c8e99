#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "senti/encoder/config.hpp"

namespace senti::encoder {

/// Row-major so that a row is one sequence position and checkpoints can be
/// written straight from the buffer. Biases and gains are 1 x n.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LayerParams {
  Matrix query_weight, query_bias;
  Matrix key_weight, key_bias;
  Matrix value_weight, value_bias;
  Matrix output_weight, output_bias;
  Matrix attention_norm_gain, attention_norm_bias;
  Matrix ffn_in_weight, ffn_in_bias;
  Matrix ffn_out_weight, ffn_out_bias;
  Matrix output_norm_gain, output_norm_bias;
};

/// Every weight of the classifier. Projections are stored input-major
/// (D_in x D_out) and applied as x * W + b.
struct EncoderParams {
  Matrix token_embedding;     // V x D
  Matrix position_embedding;  // S x D
  std::vector<LayerParams> layers;
  Matrix head_weight;  // D x 3
  Matrix head_bias;    // 1 x 3

  /// Zero tensors of the right shapes (gains included), used for gradients.
  static EncoderParams zeros(const EncoderConfig& config);
  /// Truncated normal (std 0.02, cut at two deviations) weights, unit
  /// gains, zero biases.
  static EncoderParams initialize(const EncoderConfig& config, std::uint64_t seed, double stddev = 0.02);

  /// Stable (name, tensor) listing; the order is the checkpoint order.
  std::vector<std::pair<std::string, Matrix*>> named_tensors();
  std::vector<std::pair<std::string, const Matrix*>> named_tensors() const;

  /// Throws ValidationError when any tensor's shape disagrees with `config`.
  void check_shapes(const EncoderConfig& config) const;
  bool all_finite() const;
  void set_zero();
  std::size_t parameter_count() const;
};

}  // namespace senti::encoder
