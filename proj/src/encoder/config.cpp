#include "senti/encoder/config.hpp"

#include <fmt/format.h>

#include "senti/common.hpp"

namespace senti::encoder {

void EncoderConfig::validate() const {
  if (num_layers == 0 || num_heads == 0 || hidden_size == 0 || feedforward_size == 0 || vocab_size == 0) {
    throw ValidationError("encoder sizes must all be at least 1");
  }
  if (hidden_size % num_heads != 0) {
    throw ValidationError(fmt::format("hidden size {} is not divisible by {} heads", hidden_size, num_heads));
  }
  if (max_sequence_length < 3) throw ValidationError("max sequence length must be at least 3 ([CLS] x [SEP])");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ValidationError("dropout rate must be in [0, 1)");
  if (num_classes != 3) throw ValidationError("the classifier head has exactly 3 classes");
}

EncoderConfig EncoderConfig::paper() {
  EncoderConfig c;
  c.num_layers = 12;
  c.num_heads = 12;
  c.hidden_size = 768;
  c.feedforward_size = 3072;
  c.max_sequence_length = 128;
  return c;
}

EncoderConfig EncoderConfig::desk() { return EncoderConfig{}; }

EncoderConfig EncoderConfig::named(std::string_view name) {
  if (name == "paper") return paper();
  if (name == "desk") return desk();
  throw ValidationError(fmt::format("unknown encoder profile '{}' (expected paper or desk)", name));
}

void TrainProfile::validate() const {
  if (batch_size == 0) throw ValidationError("batch_size must be at least 1");
  if (epochs == 0) throw ValidationError("epochs must be at least 1");
  if (!(learning_rate >= 0.0)) throw ValidationError("learning_rate must be non-negative");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ValidationError("Adam betas must be in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ValidationError("adam_epsilon must be positive");
}

TrainProfile TrainProfile::paper() {
  TrainProfile p;
  p.name = "paper";
  p.batch_size = 32;
  p.epochs = 10;
  p.learning_rate = 3e-6;
  return p;
}

TrainProfile TrainProfile::desk() {
  TrainProfile p;
  p.name = "desk";
  return p;
}

TrainProfile TrainProfile::named(std::string_view name) {
  if (name == "paper") return paper();
  if (name == "desk") return desk();
  throw ValidationError(fmt::format("unknown training profile '{}' (expected paper or desk)", name));
}

void TrainProfile::apply_overrides(const kv::Document& doc, const std::string& prefix) {
  if (auto v = doc.get_uint(prefix + "batch_size")) batch_size = *v;
  if (auto v = doc.get_uint(prefix + "epochs")) epochs = *v;
  if (auto v = doc.get_double(prefix + "learning_rate")) learning_rate = *v;
  if (auto v = doc.get_double(prefix + "adam_beta1")) adam_beta1 = *v;
  if (auto v = doc.get_double(prefix + "adam_beta2")) adam_beta2 = *v;
  if (auto v = doc.get_double(prefix + "adam_epsilon")) adam_epsilon = *v;
  if (auto v = doc.get_uint(prefix + "seed")) seed = *v;
}

std::string TrainProfile::to_text() const {
  std::string out;
  out += fmt::format("name = {}\n", name);
  out += fmt::format("batch_size = {}\n", batch_size);
  out += fmt::format("epochs = {}\n", epochs);
  out += fmt::format("learning_rate = {}\n", kv::format_double(learning_rate));
  out += fmt::format("adam_beta1 = {}\n", kv::format_double(adam_beta1));
  out += fmt::format("adam_beta2 = {}\n", kv::format_double(adam_beta2));
  out += fmt::format("adam_epsilon = {}\n", kv::format_double(adam_epsilon));
  out += fmt::format("seed = {}\n", seed);
  return out;
}

TrainProfile TrainProfile::from_text(std::string_view text) {
  const auto doc = kv::Document::parse(text, "<train profile>");
  TrainProfile p;
  if (auto n = doc.get_string("name")) p.name = *n;
  p.apply_overrides(doc, "");
  p.validate();
  return p;
}

}  // namespace senti::encoder
