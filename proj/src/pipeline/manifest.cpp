#include "senti/pipeline/manifest.hpp"

#include <algorithm>
#include <json.hpp>

#include "senti/hash.hpp"
#include "senti/common.hpp"

namespace senti::pipeline {

std::string relative_name(const std::filesystem::path& file, const std::filesystem::path& root) {
  const auto abs_file = std::filesystem::weakly_canonical(file);
  const auto abs_root = std::filesystem::weakly_canonical(root);
  auto rel = abs_file.lexically_relative(abs_root);
  if (rel.empty() || *rel.begin() == "..") rel = abs_file.filename();
  return rel.generic_string();
}

void Manifest::add_input(const std::filesystem::path& file, const std::filesystem::path& root) {
  inputs.push_back({relative_name(file, root), sha256_file(file)});
}

void Manifest::add_output(const std::filesystem::path& file, const std::filesystem::path& root) {
  outputs.push_back({relative_name(file, root), sha256_file(file)});
}

std::string Manifest::to_json() const {
  auto list = [](const std::vector<FileDigest>& files) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
  };
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["stage"] = stage;
  j["config_sha256"] = config_sha256;
  j["inputs"] = list(inputs);
  j["outputs"] = list(outputs);
  return j.dump(2) + "\n";
}

void Manifest::write(const std::filesystem::path& path) {
  auto by_path = [](const FileDigest& a, const FileDigest& b) { return a.path < b.path; };
  std::sort(inputs.begin(), inputs.end(), by_path);
  std::sort(outputs.begin(), outputs.end(), by_path);
  write_text_file(path, to_json());
}

}  // namespace senti::pipeline
