#include "senti/svm.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "senti/random.hpp"

namespace senti::bow {

using nlohmann::json;

namespace {

// w = scale * v, with the bias stored as the last coordinate of v. Keeping the
// scale separate makes the (1 - 1/t) shrink O(1) per step.
class ScaledWeights {
 public:
  explicit ScaledWeights(std::size_t dim) : v_(dim + 1, 0.0) {}

  double margin(const SparseVector& x) const { return scale_ * (x.dot(v_) + v_.back()); }

  void shrink(double factor) {
    if (factor <= 0.0) {
      std::fill(v_.begin(), v_.end(), 0.0);
      scale_ = 1.0;
      sq_norm_v_ = 0.0;
      return;
    }
    scale_ *= factor;
    if (scale_ < 1e-9) renormalize();
  }

  // w += k * [x, 1]
  void add(const SparseVector& x, double k) {
    const double c = k / scale_;
    double vx = v_.back();
    for (const auto& [i, xi] : x.entries) vx += v_[i] * xi;
    const double xx = x.squared_norm() + 1.0;
    for (const auto& [i, xi] : x.entries) v_[i] += c * xi;
    v_.back() += c;
    sq_norm_v_ += 2.0 * c * vx + c * c * xx;
    if (sq_norm_v_ < 0.0) sq_norm_v_ = 0.0;
  }

  double squared_norm() const { return scale_ * scale_ * sq_norm_v_; }

  void project(double radius) {
    const double n = std::sqrt(squared_norm());
    if (n > radius) shrink(radius / n);
  }

  void export_to(std::vector<double>& w, double& b) const {
    w.assign(v_.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) w[i] = scale_ * v_[i];
    b = scale_ * v_.back();
  }

 private:
  void renormalize() {
    for (double& x : v_) x *= scale_;
    sq_norm_v_ = std::inner_product(v_.begin(), v_.end(), v_.begin(), 0.0);
    scale_ = 1.0;
  }

  std::vector<double> v_;
  double scale_ = 1.0;
  double sq_norm_v_ = 0.0;
};

double objective(std::span<const double> w, double b, double lambda, std::span<const SparseVector> samples,
                 std::span<const SentimentLabel> labels, std::size_t c) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double y = class_index(labels[i]) == c ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * (samples[i].dot(w) + b));
  }
  const double sq = std::inner_product(w.begin(), w.end(), w.begin(), 0.0) + b * b;
  return 0.5 * lambda * sq + hinge / static_cast<double>(samples.size());
}

}  // namespace

SvmModel svm_train_features(std::span<const SparseVector> samples, std::span<const SentimentLabel> labels,
                            std::size_t dimension, const SvmConfig& config) {
  if (!(config.lambda > 0.0)) throw ValidationError("SVM lambda must be positive");
  if (config.epochs == 0) throw ValidationError("SVM needs at least one epoch");
  if (samples.size() != labels.size()) throw ValidationError("sample and label counts differ");
  if (std::set<SentimentLabel>(labels.begin(), labels.end()).size() < 2) {
    throw ValidationError("SVM training needs at least two distinct classes");
  }
  for (const auto& s : samples) {
    if (!s.empty() && s.entries.back().first >= dimension) throw ValidationError("feature index out of range");
  }

  SvmModel model;
  model.lambda = config.lambda;
  model.feature_mode = config.feature_mode;
  const std::size_t n = samples.size();
  const double radius = 1.0 / std::sqrt(config.lambda);

  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    ScaledWeights w(dimension);
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      shuffle_in_place(std::span<std::size_t>(order), rng);
      for (std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (config.lambda * static_cast<double>(t));
        const double y = class_index(labels[i]) == c ? 1.0 : -1.0;
        const bool violated = y * w.margin(samples[i]) < 1.0;
        w.shrink(1.0 - eta * config.lambda);
        if (violated) w.add(samples[i], eta * y);
        w.project(radius);
      }
    }
    w.export_to(model.weights[c], model.bias[c]);
    const std::vector<double> zeros(dimension, 0.0);
    model.initial_objective[c] = objective(zeros, 0.0, config.lambda, samples, labels, c);
    model.final_objective[c] = objective(model.weights[c], model.bias[c], config.lambda, samples, labels, c);
  }
  return model;
}

SvmModel svm_train(std::span<const Document> train, const BowVocab& vocab, const SvmConfig& config) {
  const auto labels = require_labels(train);
  std::vector<SparseVector> xs;
  xs.reserve(train.size());
  for (const auto& d : train) xs.push_back(vectorize(d, vocab, config.feature_mode));
  return svm_train_features(xs, labels, vocab.size(), config);
}

double svm_objective(const SvmModel& model, std::size_t c, std::span<const SparseVector> samples,
                     std::span<const SentimentLabel> labels) {
  return objective(model.weights[c], model.bias[c], model.lambda, samples, labels, c);
}

Prediction svm_predict_features(const SparseVector& x, const SvmModel& model) {
  Prediction p;
  for (std::size_t c = 0; c < kNumClasses; ++c) p.scores[c] = x.dot(model.weights[c]) + model.bias[c];
  p.label = argmax_label(p.scores);
  return p;
}

Prediction svm_predict(std::span<const std::string> tokens, const SvmModel& model, const BowVocab& vocab) {
  return svm_predict_features(vectorize(tokens, vocab, model.feature_mode), model);
}

double weight_norm(const SvmModel& model) {
  double s = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (double w : model.weights[c]) s += w * w;
    s += model.bias[c] * model.bias[c];
  }
  return std::sqrt(s);
}

void save_svm(const std::filesystem::path& path, const SvmModel& model, const BowVocab& vocab) {
  json j = {{"magic", kModelMagic},
            {"version", kModelVersion},
            {"kind", "svm"},
            {"feature_mode", to_string(model.feature_mode)},
            {"lambda", model.lambda},
            {"vocab", vocab_to_json(vocab)},
            {"weights", model.weights},
            {"bias", model.bias},
            {"initial_objective", model.initial_objective},
            {"final_objective", model.final_objective}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

std::pair<SvmModel, BowVocab> load_svm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("model file not found: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  if (j.value("magic", "") != kModelMagic || j.value("kind", "") != "svm") {
    throw ValidationError(path.string() + " is not an SVM model file");
  }
  if (j.value("version", 0) != kModelVersion) throw ValidationError(path.string() + ": unsupported model version");
  BowVocab vocab = vocab_from_json(j.at("vocab"));
  SvmModel m;
  auto mode = parse_feature_mode(j.at("feature_mode").get<std::string>());
  if (!mode) throw ValidationError(path.string() + ": unknown feature mode");
  m.feature_mode = *mode;
  m.lambda = j.at("lambda").get<double>();
  m.weights = j.at("weights").get<std::array<std::vector<double>, kNumClasses>>();
  m.bias = j.at("bias").get<std::array<double, kNumClasses>>();
  m.initial_objective = j.at("initial_objective").get<std::array<double, kNumClasses>>();
  m.final_objective = j.at("final_objective").get<std::array<double, kNumClasses>>();
  for (const auto& w : m.weights) {
    if (w.size() != vocab.size()) throw ValidationError(path.string() + ": weight shape mismatch");
  }
  return {std::move(m), std::move(vocab)};
}

}  // namespace senti::bow
