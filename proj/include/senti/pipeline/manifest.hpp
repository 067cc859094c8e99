#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace senti::pipeline {

inline constexpr int kArtifactVersion = 1;

struct FileDigest {
  std::string path;  // relative, forward slashes
  std::string sha256;
};

/// Provenance of one stage's outputs. Holds no timestamps or absolute
/// paths so that reruns on the same inputs write identical bytes.
struct Manifest {
  std::string stage;
  std::string config_sha256;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;

  /// `root` is the directory paths are reported relative to.
  void add_input(const std::filesystem::path& file, const std::filesystem::path& root);
  void add_output(const std::filesystem::path& file, const std::filesystem::path& root);
  std::string to_json() const;
  /// Sorts both lists by path, then writes to_json().
  void write(const std::filesystem::path& path);
};

/// Path of `file` relative to `root` with '/' separators; falls back to
/// the file name when `file` lies outside `root`.
std::string relative_name(const std::filesystem::path& file, const std::filesystem::path& root);

}  // namespace senti::pipeline
