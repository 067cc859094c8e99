#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "senti/common.hpp"
#include "senti/encoder/params.hpp"
#include "senti/encoder/token_vocab.hpp"

namespace senti::encoder {

/// Non-finite activations, loss or weights.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

enum class Mode { Train, Eval };

inline constexpr double kLayerNormEpsilon = 1e-12;

using Logits = std::array<double, kNumClasses>;

/// Exp-normalize with max subtraction.
Logits softmax(const Logits& logits);
/// -log softmax(logits)[label].
double cross_entropy(const Logits& logits, SentimentLabel label);

struct ForwardOptions {
  /// Skip positions after the last unmasked one. They are masked as keys,
  /// so the [CLS] output is the same either way; this only saves work.
  bool trim_padding = true;
};

/// Intermediate values of one encoder layer kept for the backward pass.
struct LayerTrace {
  Matrix input;                // n x D
  Matrix query, key, value;    // n x D
  std::vector<Matrix> attention;  // per head, n x n, rows are query positions
  Matrix context;              // n x D, heads concatenated
  Matrix attention_dropout;    // n x D scale mask, empty when inactive
  Matrix attention_normalized; // n x D, layer norm output before gain/bias
  Eigen::VectorXd attention_inv_std;
  Matrix attention_out;        // n x D, after the first layer norm
  Matrix ffn_pre;              // n x F, before GELU
  Matrix ffn_act;              // n x F
  Matrix ffn_dropout;          // n x D
  Matrix output_normalized;    // n x D
  Eigen::VectorXd output_inv_std;
  Matrix output;               // n x D
};

struct ForwardTrace {
  std::vector<TokenId> ids;       // the n positions actually computed
  std::vector<std::uint8_t> mask;
  Matrix embedding_dropout;       // n x D
  std::vector<LayerTrace> layers;
  Matrix cls;                     // 1 x D, before the head dropout
  Matrix cls_dropout;             // 1 x D
  Logits logits{};
};

struct ForwardResult {
  Logits logits{};
  std::vector<double> cls_vector;  // D entries
};

/// Token + position embeddings, then per layer: masked multi-head scaled
/// dot-product attention, residual, layer norm, GELU feed-forward, residual,
/// layer norm. The [CLS] slot's final hidden state goes through the affine
/// head. Dropout draws from `rng` only in Train mode (rng may be null in
/// Eval mode). Throws DivergenceError naming the layer on non-finite values.
ForwardTrace forward_trace(std::span<const TokenId> ids, std::span<const std::uint8_t> mask,
                           const EncoderParams& params, const EncoderConfig& config, Mode mode,
                           std::mt19937_64* rng = nullptr, const ForwardOptions& options = {});

ForwardResult forward(std::span<const TokenId> ids, std::span<const std::uint8_t> mask, const EncoderParams& params,
                      const EncoderConfig& config, Mode mode = Mode::Eval, std::mt19937_64* rng = nullptr,
                      const ForwardOptions& options = {});

/// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(logits).
void backward(const ForwardTrace& trace, const Logits& dlogits, const EncoderParams& params,
              const EncoderConfig& config, EncoderParams& grads);

/// Cross-entropy of one example; adds `scale` times its gradient to `grads`.
double loss_and_gradient(const EncodedInput& input, SentimentLabel label, const EncoderParams& params,
                         const EncoderConfig& config, EncoderParams& grads, double scale = 1.0,
                         Mode mode = Mode::Eval, std::mt19937_64* rng = nullptr);

struct EncoderPrediction {
  SentimentLabel label = SentimentLabel::Negative;
  Logits probabilities{};
};

/// Eval-mode forward, softmax, argmax with ties to the lowest label code.
EncoderPrediction predict(std::span<const std::string> tokens, const EncoderParams& params, const TokenVocab& vocab,
                          const EncoderConfig& config);
EncoderPrediction predict(const EncodedInput& input, const EncoderParams& params, const EncoderConfig& config);

}  // namespace senti::encoder
