#include "senti/encoder/params.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>

#include "senti/common.hpp"
#include "senti/random.hpp"

namespace senti::encoder {

namespace {

struct Shape {
  Eigen::Index rows, cols;
};

// Walks every tensor with its expected shape, in checkpoint order.
template <typename Params, typename Fn>
void visit(Params& p, const EncoderConfig& c, Fn&& fn) {
  const auto D = static_cast<Eigen::Index>(c.hidden_size);
  const auto F = static_cast<Eigen::Index>(c.feedforward_size);
  const auto V = static_cast<Eigen::Index>(c.vocab_size);
  const auto S = static_cast<Eigen::Index>(c.max_sequence_length);
  const auto C = static_cast<Eigen::Index>(c.num_classes);
  fn("embeddings.token", p.token_embedding, Shape{V, D}, 'w');
  fn("embeddings.position", p.position_embedding, Shape{S, D}, 'w');
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& L = p.layers[l];
    const std::string pre = fmt::format("layer.{}.", l);
    fn(pre + "attention.query.weight", L.query_weight, Shape{D, D}, 'w');
    fn(pre + "attention.query.bias", L.query_bias, Shape{1, D}, 'b');
    fn(pre + "attention.key.weight", L.key_weight, Shape{D, D}, 'w');
    fn(pre + "attention.key.bias", L.key_bias, Shape{1, D}, 'b');
    fn(pre + "attention.value.weight", L.value_weight, Shape{D, D}, 'w');
    fn(pre + "attention.value.bias", L.value_bias, Shape{1, D}, 'b');
    fn(pre + "attention.output.weight", L.output_weight, Shape{D, D}, 'w');
    fn(pre + "attention.output.bias", L.output_bias, Shape{1, D}, 'b');
    fn(pre + "attention.norm.gain", L.attention_norm_gain, Shape{1, D}, 'g');
    fn(pre + "attention.norm.bias", L.attention_norm_bias, Shape{1, D}, 'b');
    fn(pre + "ffn.in.weight", L.ffn_in_weight, Shape{D, F}, 'w');
    fn(pre + "ffn.in.bias", L.ffn_in_bias, Shape{1, F}, 'b');
    fn(pre + "ffn.out.weight", L.ffn_out_weight, Shape{F, D}, 'w');
    fn(pre + "ffn.out.bias", L.ffn_out_bias, Shape{1, D}, 'b');
    fn(pre + "output.norm.gain", L.output_norm_gain, Shape{1, D}, 'g');
    fn(pre + "output.norm.bias", L.output_norm_bias, Shape{1, D}, 'b');
  }
  fn("classifier.weight", p.head_weight, Shape{D, C}, 'w');
  fn("classifier.bias", p.head_bias, Shape{1, C}, 'b');
}

double truncated_normal(std::mt19937_64& rng, double stddev) {
  while (true) {
    const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
    const double u2 = uniform_unit(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    if (std::abs(z) <= 2.0) return z * stddev;
  }
}

}  // namespace

EncoderParams EncoderParams::zeros(const EncoderConfig& config) {
  config.validate();
  EncoderParams p;
  p.layers.resize(config.num_layers);
  visit(p, config, [](const std::string&, Matrix& m, Shape s, char) { m = Matrix::Zero(s.rows, s.cols); });
  return p;
}

EncoderParams EncoderParams::initialize(const EncoderConfig& config, std::uint64_t seed, double stddev) {
  EncoderParams p = zeros(config);
  std::mt19937_64 rng(seed);
  visit(p, config, [&](const std::string&, Matrix& m, Shape, char kind) {
    if (kind == 'w') {
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = truncated_normal(rng, stddev);
    } else if (kind == 'g') {
      m.setOnes();
    }
  });
  return p;
}

std::vector<std::pair<std::string, Matrix*>> EncoderParams::named_tensors() {
  std::vector<std::pair<std::string, Matrix*>> out;
  EncoderConfig shape_free;
  shape_free.vocab_size = 1;
  visit(*this, shape_free, [&](const std::string& name, Matrix& m, Shape, char) { out.emplace_back(name, &m); });
  return out;
}

std::vector<std::pair<std::string, const Matrix*>> EncoderParams::named_tensors() const {
  std::vector<std::pair<std::string, const Matrix*>> out;
  for (auto& [name, m] : const_cast<EncoderParams*>(this)->named_tensors()) out.emplace_back(name, m);
  return out;
}

void EncoderParams::check_shapes(const EncoderConfig& config) const {
  config.validate();
  if (layers.size() != config.num_layers) {
    throw ValidationError(fmt::format("expected {} layers, found {}", config.num_layers, layers.size()));
  }
  visit(*this, config, [](const std::string& name, const Matrix& m, Shape s, char) {
    if (m.rows() != s.rows || m.cols() != s.cols) {
      throw ValidationError(fmt::format("tensor {} is {}x{}, expected {}x{}", name, m.rows(), m.cols(), s.rows, s.cols));
    }
  });
}

bool EncoderParams::all_finite() const {
  for (const auto& [_, m] : named_tensors()) {
    if (!m->allFinite()) return false;
  }
  return true;
}

void EncoderParams::set_zero() {
  for (auto& [_, m] : named_tensors()) m->setZero();
}

std::size_t EncoderParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [_, m] : named_tensors()) n += static_cast<std::size_t>(m->size());
  return n;
}

}  // namespace senti::encoder
