#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace senti::kv {

/// `key = value` text: one pair per line, '#' starts a comment line, keys
/// are case-sensitive, and a repeated key is an error.
struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Document {
 public:
  static Document parse(std::string_view text, std::string_view source_name = "<string>");
  static Document load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.contains(key); }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

  // Typed getters throw senti::ValidationError naming the file and line.
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::uint64_t> get_uint(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  /// Comma-separated list, entries trimmed, empty entries dropped.
  std::optional<std::vector<std::string>> get_list(const std::string& key) const;

  void set(const std::string& key, std::string value) { entries_[key] = Entry{std::move(value), 0}; }

 private:
  std::string where(const std::string& key) const;

  std::map<std::string, Entry> entries_;
  std::string source_;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

}  // namespace senti::kv
