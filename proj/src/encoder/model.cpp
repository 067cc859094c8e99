#include "senti/encoder/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "senti/random.hpp"

namespace senti::encoder {

Logits softmax(const Logits& logits) {
  const double m = std::max({logits[0], logits[1], logits[2]});
  Logits out{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out[c] = std::exp(logits[c] - m);
    sum += out[c];
  }
  for (double& p : out) p /= sum;
  return out;
}

double cross_entropy(const Logits& logits, SentimentLabel label) {
  const double m = std::max({logits[0], logits[1], logits[2]});
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - m);
  return m + std::log(sum) - logits[class_index(label)];
}

namespace {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }

double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

// Inverted dropout: kept entries are scaled by 1/(1-p) so eval mode needs no rescale.
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform_unit(rng) < rate ? 0.0 : keep_scale;
  return m;
}

void layer_norm(const Matrix& x, const Matrix& gain, const Matrix& bias, Matrix& normalized,
                Eigen::VectorXd& inv_std, Matrix& out) {
  const Eigen::Index n = x.rows();
  normalized.resize(n, x.cols());
  inv_std.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = x.row(i).mean();
    const auto centered = (x.row(i).array() - mu).eval();
    const double var = centered.square().mean();
    const double inv = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    normalized.row(i) = (centered * inv).matrix();
    inv_std(i) = inv;
  }
  out = ((normalized.array().rowwise() * gain.row(0).array()).rowwise() + bias.row(0).array()).matrix();
}

Matrix layer_norm_backward(const Matrix& dnormalized, const Matrix& normalized, const Eigen::VectorXd& inv_std) {
  Matrix dx(dnormalized.rows(), dnormalized.cols());
  for (Eigen::Index i = 0; i < dx.rows(); ++i) {
    const auto dy = dnormalized.row(i).array();
    const auto y = normalized.row(i).array();
    const double mean_dy = dy.mean();
    const double mean_dyy = (dy * y).mean();
    dx.row(i) = (inv_std(i) * (dy - mean_dy - y * mean_dyy)).matrix();
  }
  return dx;
}

Matrix add_bias(const Matrix& x, const Matrix& bias) { return x.rowwise() + bias.row(0); }

}  // namespace

ForwardTrace forward_trace(std::span<const TokenId> ids, std::span<const std::uint8_t> mask,
                           const EncoderParams& params, const EncoderConfig& config, Mode mode,
                           std::mt19937_64* rng, const ForwardOptions& options) {
  if (ids.size() != mask.size()) throw ValidationError("ids and attention mask differ in length");
  if (ids.empty() || ids.size() > config.max_sequence_length) {
    throw ValidationError(fmt::format("sequence length {} outside [1, {}]", ids.size(), config.max_sequence_length));
  }
  std::size_t n = ids.size();
  if (options.trim_padding) {
    while (n > 0 && mask[n - 1] == 0) --n;
  }
  if (std::none_of(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), [](auto m) { return m != 0; })) {
    throw ValidationError("attention mask has no unmasked position");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (ids[i] >= config.vocab_size) throw ValidationError(fmt::format("token id {} outside vocabulary", ids[i]));
  }

  const auto D = static_cast<Eigen::Index>(config.hidden_size);
  const auto H = config.num_heads;
  const auto dh = static_cast<Eigen::Index>(config.head_size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const auto rows = static_cast<Eigen::Index>(n);
  const bool drop = mode == Mode::Train && config.dropout_rate > 0.0 && rng != nullptr;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  ForwardTrace trace;
  trace.ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n));
  trace.mask.assign(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n));

  Matrix x(rows, D);
  for (Eigen::Index i = 0; i < rows; ++i) {
    x.row(i) = params.token_embedding.row(trace.ids[static_cast<std::size_t>(i)]) + params.position_embedding.row(i);
  }
  if (drop) {
    trace.embedding_dropout = dropout_mask(rows, D, config.dropout_rate, *rng);
    x = x.cwiseProduct(trace.embedding_dropout);
  }

  trace.layers.reserve(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const LayerParams& P = params.layers[l];
    LayerTrace lt;
    lt.input = x;
    lt.query = add_bias(x * P.query_weight, P.query_bias);
    lt.key = add_bias(x * P.key_weight, P.key_bias);
    lt.value = add_bias(x * P.value_weight, P.value_bias);
    lt.context = Matrix::Zero(rows, D);
    lt.attention.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
      const Eigen::Index off = static_cast<Eigen::Index>(h) * dh;
      Matrix scores = (lt.query.middleCols(off, dh) * lt.key.middleCols(off, dh).transpose()) * scale;
      for (Eigen::Index j = 0; j < rows; ++j) {
        if (trace.mask[static_cast<std::size_t>(j)] == 0) scores.col(j).setConstant(kNegInf);
      }
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double m = scores.row(i).maxCoeff();
        scores.row(i) = (scores.row(i).array() - m).exp().matrix();
        scores.row(i) /= scores.row(i).sum();
      }
      lt.context.middleCols(off, dh) = scores * lt.value.middleCols(off, dh);
      lt.attention[h] = std::move(scores);
    }
    Matrix attn = add_bias(lt.context * P.output_weight, P.output_bias);
    if (drop) {
      lt.attention_dropout = dropout_mask(rows, D, config.dropout_rate, *rng);
      attn = attn.cwiseProduct(lt.attention_dropout);
    }
    layer_norm(lt.input + attn, P.attention_norm_gain, P.attention_norm_bias, lt.attention_normalized,
               lt.attention_inv_std, lt.attention_out);

    lt.ffn_pre = add_bias(lt.attention_out * P.ffn_in_weight, P.ffn_in_bias);
    lt.ffn_act = lt.ffn_pre.unaryExpr([](double v) { return gelu(v); });
    Matrix ffn = add_bias(lt.ffn_act * P.ffn_out_weight, P.ffn_out_bias);
    if (drop) {
      lt.ffn_dropout = dropout_mask(rows, D, config.dropout_rate, *rng);
      ffn = ffn.cwiseProduct(lt.ffn_dropout);
    }
    layer_norm(lt.attention_out + ffn, P.output_norm_gain, P.output_norm_bias, lt.output_normalized,
               lt.output_inv_std, lt.output);
    if (!lt.output.allFinite()) throw DivergenceError(fmt::format("non-finite activations in encoder layer {}", l));
    x = lt.output;
    trace.layers.push_back(std::move(lt));
  }

  trace.cls = x.row(0);
  Matrix cls = trace.cls;
  if (drop) {
    trace.cls_dropout = dropout_mask(1, D, config.dropout_rate, *rng);
    cls = cls.cwiseProduct(trace.cls_dropout);
  }
  const Matrix logits = cls * params.head_weight + params.head_bias;
  for (std::size_t c = 0; c < kNumClasses; ++c) trace.logits[c] = logits(0, static_cast<Eigen::Index>(c));
  if (!logits.allFinite()) throw DivergenceError("non-finite logits in classifier head");
  return trace;
}

ForwardResult forward(std::span<const TokenId> ids, std::span<const std::uint8_t> mask, const EncoderParams& params,
                      const EncoderConfig& config, Mode mode, std::mt19937_64* rng, const ForwardOptions& options) {
  const ForwardTrace trace = forward_trace(ids, mask, params, config, mode, rng, options);
  ForwardResult r;
  r.logits = trace.logits;
  r.cls_vector.assign(trace.cls.data(), trace.cls.data() + trace.cls.size());
  return r;
}

void backward(const ForwardTrace& trace, const Logits& dlogits, const EncoderParams& params,
              const EncoderConfig& config, EncoderParams& grads) {
  const auto rows = static_cast<Eigen::Index>(trace.ids.size());
  const auto D = static_cast<Eigen::Index>(config.hidden_size);
  const auto dh = static_cast<Eigen::Index>(config.head_size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Matrix dl(1, static_cast<Eigen::Index>(kNumClasses));
  for (std::size_t c = 0; c < kNumClasses; ++c) dl(0, static_cast<Eigen::Index>(c)) = dlogits[c];

  Matrix cls = trace.cls;
  if (trace.cls_dropout.size()) cls = cls.cwiseProduct(trace.cls_dropout);
  grads.head_weight += cls.transpose() * dl;
  grads.head_bias += dl;
  Matrix dcls = dl * params.head_weight.transpose();
  if (trace.cls_dropout.size()) dcls = dcls.cwiseProduct(trace.cls_dropout);

  Matrix dx = Matrix::Zero(rows, D);
  dx.row(0) = dcls.row(0);

  for (std::size_t l = trace.layers.size(); l-- > 0;) {
    const LayerTrace& lt = trace.layers[l];
    const LayerParams& P = params.layers[l];
    LayerParams& G = grads.layers[l];

    // Second residual block: output = LN(attention_out + dropout(FFN(attention_out))).
    G.output_norm_gain += dx.cwiseProduct(lt.output_normalized).colwise().sum();
    G.output_norm_bias += dx.colwise().sum();
    const Matrix dy2 = (dx.array().rowwise() * P.output_norm_gain.row(0).array()).matrix();
    const Matrix dr2 = layer_norm_backward(dy2, lt.output_normalized, lt.output_inv_std);
    Matrix d_attn_out = dr2;
    Matrix dffn = dr2;
    if (lt.ffn_dropout.size()) dffn = dffn.cwiseProduct(lt.ffn_dropout);
    G.ffn_out_weight += lt.ffn_act.transpose() * dffn;
    G.ffn_out_bias += dffn.colwise().sum();
    const Matrix dact = dffn * P.ffn_out_weight.transpose();
    const Matrix dpre = dact.cwiseProduct(lt.ffn_pre.unaryExpr([](double v) { return gelu_grad(v); }));
    G.ffn_in_weight += lt.attention_out.transpose() * dpre;
    G.ffn_in_bias += dpre.colwise().sum();
    d_attn_out += dpre * P.ffn_in_weight.transpose();

    // First residual block: attention_out = LN(input + dropout(MHA(input))).
    G.attention_norm_gain += d_attn_out.cwiseProduct(lt.attention_normalized).colwise().sum();
    G.attention_norm_bias += d_attn_out.colwise().sum();
    const Matrix dy1 = (d_attn_out.array().rowwise() * P.attention_norm_gain.row(0).array()).matrix();
    const Matrix dr1 = layer_norm_backward(dy1, lt.attention_normalized, lt.attention_inv_std);
    Matrix dinput = dr1;
    Matrix dattn = dr1;
    if (lt.attention_dropout.size()) dattn = dattn.cwiseProduct(lt.attention_dropout);
    G.output_weight += lt.context.transpose() * dattn;
    G.output_bias += dattn.colwise().sum();
    const Matrix dctx = dattn * P.output_weight.transpose();

    Matrix dq = Matrix::Zero(rows, D), dk = Matrix::Zero(rows, D), dv = Matrix::Zero(rows, D);
    for (std::size_t h = 0; h < lt.attention.size(); ++h) {
      const Eigen::Index off = static_cast<Eigen::Index>(h) * dh;
      const Matrix& A = lt.attention[h];
      const Matrix dctx_h = dctx.middleCols(off, dh);
      const Matrix dA = dctx_h * lt.value.middleCols(off, dh).transpose();
      dv.middleCols(off, dh) = A.transpose() * dctx_h;
      const Eigen::VectorXd row_dot = dA.cwiseProduct(A).rowwise().sum();
      const Matrix dS = A.cwiseProduct(dA.colwise() - row_dot) * scale;
      dq.middleCols(off, dh) = dS * lt.key.middleCols(off, dh);
      dk.middleCols(off, dh) = dS.transpose() * lt.query.middleCols(off, dh);
    }
    G.query_weight += lt.input.transpose() * dq;
    G.query_bias += dq.colwise().sum();
    G.key_weight += lt.input.transpose() * dk;
    G.key_bias += dk.colwise().sum();
    G.value_weight += lt.input.transpose() * dv;
    G.value_bias += dv.colwise().sum();
    dinput += dq * P.query_weight.transpose() + dk * P.key_weight.transpose() + dv * P.value_weight.transpose();
    dx = std::move(dinput);
  }

  if (trace.embedding_dropout.size()) dx = dx.cwiseProduct(trace.embedding_dropout);
  for (Eigen::Index i = 0; i < rows; ++i) {
    grads.token_embedding.row(trace.ids[static_cast<std::size_t>(i)]) += dx.row(i);
    grads.position_embedding.row(i) += dx.row(i);
  }
}

double loss_and_gradient(const EncodedInput& input, SentimentLabel label, const EncoderParams& params,
                         const EncoderConfig& config, EncoderParams& grads, double scale, Mode mode,
                         std::mt19937_64* rng) {
  const ForwardTrace trace = forward_trace(input.ids, input.attention_mask, params, config, mode, rng);
  const Logits probs = softmax(trace.logits);
  Logits dlogits{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    dlogits[c] = scale * (probs[c] - (c == class_index(label) ? 1.0 : 0.0));
  }
  backward(trace, dlogits, params, config, grads);
  return cross_entropy(trace.logits, label);
}

EncoderPrediction predict(const EncodedInput& input, const EncoderParams& params, const EncoderConfig& config) {
  const ForwardResult r = forward(input.ids, input.attention_mask, params, config, Mode::Eval);
  EncoderPrediction p;
  p.probabilities = softmax(r.logits);
  p.label = argmax_label(p.probabilities);
  return p;
}

EncoderPrediction predict(std::span<const std::string> tokens, const EncoderParams& params, const TokenVocab& vocab,
                          const EncoderConfig& config) {
  return predict(format_input(tokens, vocab, config.max_sequence_length), params, config);
}

}  // namespace senti::encoder
