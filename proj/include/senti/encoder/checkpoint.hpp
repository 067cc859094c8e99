#pragma once

#include <filesystem>

#include "senti/encoder/config.hpp"
#include "senti/encoder/params.hpp"

namespace senti::encoder {

inline constexpr char kCheckpointMagic[8] = {'S', 'E', 'N', 'T', 'I', 'C', 'K', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  EncoderConfig config;
  EncoderParams params;
};

/// Layout, all integers u32 and all reals f32, little-endian:
///   magic[8] version L H D F S V C dropout(f32) tensor_count
///   per tensor: name_len name rows cols data[rows*cols] (row-major)
/// Weights are narrowed to f32 on save.
void save_checkpoint(const std::filesystem::path& path, const EncoderConfig& config, const EncoderParams& params);

/// Throws ValidationError on a bad magic or version, unknown or missing
/// tensors, shape mismatches and truncation.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace senti::encoder
