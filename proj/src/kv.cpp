#include "senti/kv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "senti/common.hpp"

namespace senti::kv {

Document Document::parse(std::string_view text, std::string_view source_name) {
  Document doc;
  doc.source_ = std::string(source_name);
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(fmt::format("{}:{}: expected 'key = value'", doc.source_, lineno));
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ValidationError(fmt::format("{}:{}: empty key", doc.source_, lineno));
    if (doc.entries_.contains(key)) {
      throw ValidationError(fmt::format("{}:{}: duplicate key '{}'", doc.source_, lineno, key));
    }
    doc.entries_.emplace(std::move(key), Entry{trim(std::string_view(line).substr(eq + 1)), lineno});
  }
  return doc;
}

Document Document::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::string Document::where(const std::string& key) const {
  auto it = entries_.find(key);
  return fmt::format("{}:{}: {}", source_, it == entries_.end() ? 0 : it->second.line, key);
}

std::optional<std::string> Document::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::optional<std::uint64_t> Document::get_uint(const std::string& key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  std::uint64_t v = 0;
  auto res = std::from_chars(s->data(), s->data() + s->size(), v);
  if (res.ec != std::errc{} || res.ptr != s->data() + s->size()) {
    throw ValidationError(fmt::format("{}: expected a non-negative integer, got '{}'", where(key), *s));
  }
  return v;
}

std::optional<double> Document::get_double(const std::string& key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s->data(), s->data() + s->size(), v);
  if (res.ec != std::errc{} || res.ptr != s->data() + s->size()) {
    throw ValidationError(fmt::format("{}: expected a number, got '{}'", where(key), *s));
  }
  return v;
}

std::optional<bool> Document::get_bool(const std::string& key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  const std::string t = ascii_lower(*s);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ValidationError(fmt::format("{}: expected true or false, got '{}'", where(key), *s));
}

std::optional<std::vector<std::string>> Document::get_list(const std::string& key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s->size()) {
    std::size_t end = s->find(',', pos);
    if (end == std::string::npos) end = s->size();
    std::string item = trim(std::string_view(*s).substr(pos, end - pos));
    if (!item.empty()) out.push_back(std::move(item));
    pos = end + 1;
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace senti::kv
