#include "senti/preprocess.hpp"

#include <fmt/format.h>

#include <fstream>
#include <regex>

namespace senti::preprocess {

StopwordDict load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("stopword file not found: " + path.string());
  StopwordDict dict;
  dict.source_name = path.filename().string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(std::string_view(t).substr(1));
      if (body.rfind("source:", 0) == 0) dict.source_name = trim(std::string_view(body).substr(7));
      continue;
    }
    t = ascii_lower(t);
    if (std::any_of(t.begin(), t.end(), is_space)) {
      throw ValidationError(fmt::format("{}:{}: stopword '{}' contains whitespace", path.string(), lineno, t));
    }
    dict.words.insert(std::move(t));
  }
  return dict;
}

namespace {

bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool is_letter(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

std::string cleanse(std::string_view raw_text) {
  static const std::regex kUrl(R"((https?://|www\.|t\.co/)\S*)");
  static const std::regex kMention(R"(@[a-z0-9_]+)");

  std::string text = ascii_lower(raw_text);
  text = std::regex_replace(text, kUrl, " ");
  text = std::regex_replace(text, kMention, " ");
  std::replace(text.begin(), text.end(), '#', ' ');

  std::string kept(text.size(), ' ');
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (is_alnum(c)) {
      kept[i] = c;
    } else if (c == '-' && i > 0 && i + 1 < text.size() && is_alnum(text[i - 1]) && is_alnum(text[i + 1])) {
      kept[i] = c;
    }
  }

  std::string out;
  out.reserve(kept.size());
  for (const auto& word : split_whitespace(kept)) {
    if (std::none_of(word.begin(), word.end(), is_letter)) continue;
    if (word.find("http") != std::string::npos) continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view clean_text) { return split_whitespace(clean_text); }

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopwordDict& dict) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!dict.contains(t)) out.push_back(t);
  }
  return out;
}

Document make_document(const TweetRecord& record, const StopwordDict& dict) {
  Document doc;
  doc.id = record.id;
  doc.raw_text = record.text;
  doc.clean_text = cleanse(record.text);
  const auto tokens = tokenize(doc.clean_text);
  doc.tokens = remove_stopwords(tokens, dict);
  return doc;
}

std::vector<Document> make_documents(std::span<const TweetRecord> records, const StopwordDict& dict) {
  std::vector<Document> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(make_document(r, dict));
  return out;
}

}  // namespace senti::preprocess
