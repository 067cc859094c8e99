#include "senti/encoder/train.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "senti/bow.hpp"
#include "senti/csv.hpp"
#include "senti/kv.hpp"
#include "senti/random.hpp"

namespace senti::encoder {

namespace {

// Dropout gets a stream separate from the batch shuffle.
constexpr std::uint64_t kDropoutStream = 0x64726f706f7574ULL;

std::vector<EncodedInput> encode_all(std::span<const Document> docs, const TokenVocab& vocab,
                                     const EncoderConfig& config) {
  std::vector<EncodedInput> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(format_input(d.tokens, vocab, config.max_sequence_length));
  return out;
}

SplitScore score_encoded(std::span<const EncodedInput> inputs, std::span<const Document> docs,
                         const EncoderParams& params, const EncoderConfig& config) {
  SplitScore s;
  if (inputs.empty()) return s;
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ForwardResult r = forward(inputs[i].ids, inputs[i].attention_mask, params, config, Mode::Eval);
    loss += cross_entropy(r.logits, *docs[i].label);
    if (argmax_label(softmax(r.logits)) == *docs[i].label) ++correct;
  }
  s.mean_loss = loss / static_cast<double>(inputs.size());
  s.accuracy = static_cast<double>(correct) / static_cast<double>(inputs.size());
  return s;
}

struct AdamState {
  EncoderParams m, v;
  std::uint64_t step = 0;
};

void adam_update(EncoderParams& params, const EncoderParams& grads, AdamState& state, const TrainProfile& p) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(p.adam_beta1, t);
  const double c2 = 1.0 - std::pow(p.adam_beta2, t);
  auto w = params.named_tensors();
  const auto g = grads.named_tensors();
  auto m = state.m.named_tensors();
  auto v = state.v.named_tensors();
  for (std::size_t i = 0; i < w.size(); ++i) {
    Matrix& W = *w[i].second;
    const Matrix& G = *g[i].second;
    Matrix& M = *m[i].second;
    Matrix& V = *v[i].second;
    M = p.adam_beta1 * M + (1.0 - p.adam_beta1) * G;
    V = p.adam_beta2 * V + (1.0 - p.adam_beta2) * G.cwiseProduct(G);
    W.array() -= p.learning_rate * (M.array() / c1) / ((V.array() / c2).sqrt() + p.adam_epsilon);
  }
}

}  // namespace

SplitScore evaluate_split(std::span<const Document> documents, const EncoderParams& params, const TokenVocab& vocab,
                          const EncoderConfig& config) {
  bow::require_labels(documents);
  const auto inputs = encode_all(documents, vocab, config);
  return score_encoded(inputs, documents, params, config);
}

TrainResult fine_tune(std::span<const Document> train, std::span<const Document> validation, const TokenVocab& vocab,
                      const EncoderConfig& config, const TrainProfile& profile, std::optional<EncoderParams> initial,
                      const std::function<void(const EpochStats&)>& on_epoch) {
  if (train.empty()) throw ValidationError("fine-tuning needs at least one training document");
  config.validate();
  profile.validate();
  if (config.vocab_size != vocab.size()) {
    throw ValidationError(
        fmt::format("encoder vocab_size {} does not match token vocabulary size {}", config.vocab_size, vocab.size()));
  }
  bow::require_labels(train);
  bow::require_labels(validation);

  TrainResult result;
  result.params = initial ? std::move(*initial) : EncoderParams::initialize(config, profile.seed);
  result.params.check_shapes(config);

  const auto train_inputs = encode_all(train, vocab, config);
  const auto val_inputs = encode_all(validation, vocab, config);

  AdamState adam{EncoderParams::zeros(config), EncoderParams::zeros(config), 0};
  EncoderParams grads = EncoderParams::zeros(config);
  std::mt19937_64 batch_rng(profile.seed);
  std::mt19937_64 dropout_rng(profile.seed ^ kDropoutStream);

  std::vector<std::size_t> order(train.size());
  for (std::size_t epoch = 1; epoch <= profile.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_in_place(std::span<std::size_t>(order), batch_rng);
    std::size_t step = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += profile.batch_size, ++step) {
      const std::size_t end = std::min(order.size(), begin + profile.batch_size);
      const double scale = 1.0 / static_cast<double>(end - begin);
      grads.set_zero();
      double batch_loss = 0.0;
      try {
        for (std::size_t k = begin; k < end; ++k) {
          const std::size_t i = order[k];
          batch_loss += loss_and_gradient(train_inputs[i], *train[i].label, result.params, config, grads, scale,
                                          Mode::Train, &dropout_rng);
        }
      } catch (const DivergenceError& e) {
        throw DivergenceError(fmt::format("epoch {} step {}: {}", epoch, step, e.what()));
      }
      if (!std::isfinite(batch_loss) || !grads.all_finite()) {
        throw DivergenceError(fmt::format("epoch {} step {}: non-finite loss or gradient", epoch, step));
      }
      adam_update(result.params, grads, adam, profile);
      if (!result.params.all_finite()) {
        throw DivergenceError(fmt::format("epoch {} step {}: non-finite weights after update", epoch, step));
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    const SplitScore tr = score_encoded(train_inputs, train, result.params, config);
    stats.train_loss = tr.mean_loss;
    stats.train_accuracy = tr.accuracy;
    if (!validation.empty()) {
      const SplitScore va = score_encoded(val_inputs, validation, result.params, config);
      stats.validation_loss = va.mean_loss;
      stats.validation_accuracy = va.accuracy;
    }
    if (on_epoch) on_epoch(stats);
    result.history.push_back(stats);
  }
  return result;
}

void write_history_csv(const std::filesystem::path& path, std::span<const EpochStats> history,
                       const TrainProfile& profile) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << "epoch,train_loss,train_acc,val_loss,val_acc,batch_size,epochs,learning_rate\n";
  auto opt = [](const std::optional<double>& v) { return v ? kv::format_double(*v) : std::string(); };
  for (const auto& s : history) {
    out << csv::format_row({std::to_string(s.epoch), kv::format_double(s.train_loss),
                            kv::format_double(s.train_accuracy), opt(s.validation_loss),
                            opt(s.validation_accuracy), std::to_string(profile.batch_size),
                            std::to_string(profile.epochs), kv::format_double(profile.learning_rate)});
  }
}

}  // namespace senti::encoder
