#include "senti/encoder/checkpoint.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "senti/common.hpp"

namespace senti::encoder {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

void put_f32(std::ostream& out, float v) { out.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t narrow(std::size_t v, const char* what) {
  if (v > UINT32_MAX) throw ValidationError(fmt::format("{} {} does not fit the checkpoint format", what, v));
  return static_cast<std::uint32_t>(v);
}

class Input {
 public:
  Input(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  void read(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw ValidationError(fmt::format("checkpoint '{}' is truncated while reading {}", source_, what));
    }
  }
  std::uint32_t u32(const char* what) {
    std::uint32_t v = 0;
    read(&v, 4, what);
    return v;
  }
  float f32(const char* what) {
    float v = 0;
    read(&v, 4, what);
    return v;
  }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const EncoderConfig& config, const EncoderParams& params) {
  params.check_shapes(config);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write checkpoint '{}'", path.string()));
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put_u32(out, kCheckpointVersion);
  put_u32(out, narrow(config.num_layers, "num_layers"));
  put_u32(out, narrow(config.num_heads, "num_heads"));
  put_u32(out, narrow(config.hidden_size, "hidden_size"));
  put_u32(out, narrow(config.feedforward_size, "feedforward_size"));
  put_u32(out, narrow(config.max_sequence_length, "max_sequence_length"));
  put_u32(out, narrow(config.vocab_size, "vocab_size"));
  put_u32(out, narrow(config.num_classes, "num_classes"));
  put_f32(out, static_cast<float>(config.dropout_rate));
  const auto tensors = params.named_tensors();
  put_u32(out, narrow(tensors.size(), "tensor count"));
  for (const auto& [name, m] : tensors) {
    put_u32(out, narrow(name.size(), "name length"));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, narrow(static_cast<std::size_t>(m->rows()), "rows"));
    put_u32(out, narrow(static_cast<std::size_t>(m->cols()), "cols"));
    for (Eigen::Index i = 0; i < m->size(); ++i) put_f32(out, static_cast<float>(m->data()[i]));
  }
  if (!out) throw Error(fmt::format("failed writing checkpoint '{}'", path.string()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ValidationError(fmt::format("checkpoint '{}' not found", path.string()));
  Input in(file, path.string());

  char magic[8];
  in.read(magic, sizeof magic, "magic");
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw ValidationError(fmt::format("'{}' is not a checkpoint (bad magic)", in.source()));
  }
  const std::uint32_t version = in.u32("version");
  if (version != kCheckpointVersion) {
    throw ValidationError(fmt::format("checkpoint '{}' has unsupported version {}", in.source(), version));
  }
  Checkpoint ck;
  ck.config.num_layers = in.u32("num_layers");
  ck.config.num_heads = in.u32("num_heads");
  ck.config.hidden_size = in.u32("hidden_size");
  ck.config.feedforward_size = in.u32("feedforward_size");
  ck.config.max_sequence_length = in.u32("max_sequence_length");
  ck.config.vocab_size = in.u32("vocab_size");
  ck.config.num_classes = in.u32("num_classes");
  // The rate is stored as f32; widen through the shortest decimal so 0.1 comes back as 0.1.
  ck.config.dropout_rate = std::stod(fmt::format("{}", in.f32("dropout")));
  ck.config.validate();

  ck.params = EncoderParams::zeros(ck.config);
  std::map<std::string, Matrix*> slots;
  for (auto& [name, m] : ck.params.named_tensors()) slots.emplace(name, m);

  const std::uint32_t count = in.u32("tensor count");
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::uint32_t len = in.u32("name length");
    if (len > 4096) throw ValidationError(fmt::format("checkpoint '{}' has an implausible tensor name", in.source()));
    std::string name(len, '\0');
    in.read(name.data(), len, "tensor name");
    const auto it = slots.find(name);
    if (it == slots.end()) {
      throw ValidationError(fmt::format("checkpoint '{}' has unknown tensor '{}'", in.source(), name));
    }
    Matrix& m = *it->second;
    const std::uint32_t rows = in.u32("rows");
    const std::uint32_t cols = in.u32("cols");
    if (rows != m.rows() || cols != m.cols()) {
      throw ValidationError(fmt::format("checkpoint '{}' tensor '{}' is {}x{}, expected {}x{}", in.source(), name,
                                        rows, cols, m.rows(), m.cols()));
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = in.f32(name.c_str());
    slots.erase(it);
  }
  if (!slots.empty()) {
    throw ValidationError(fmt::format("checkpoint '{}' is missing tensor '{}'", in.source(), slots.begin()->first));
  }
  if (!ck.params.all_finite()) throw ValidationError(fmt::format("checkpoint '{}' has non-finite weights", in.source()));
  return ck;
}

}  // namespace senti::encoder
