#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "senti/common.hpp"

namespace senti::preprocess {

struct StopwordDict {
  std::unordered_set<std::string> words;
  std::string source_name;

  bool contains(const std::string& token) const { return words.contains(token); }
};

/// One word per line; blank lines and '#' comments are skipped. A comment of
/// the form "# source: <name>" sets source_name, which otherwise defaults to
/// the file name. Entries are lowercased; an entry with inner whitespace is a
/// ValidationError.
StopwordDict load_stopwords(const std::filesystem::path& path);

/// Ordered cleansing rules:
///   1. lowercase (ASCII)
///   2. drop URLs (http://, https://, www., t.co/ up to the next space)
///   3. drop @mentions
///   4. turn '#' into a separator so the hashtag word survives
///   5. every byte other than [a-z0-9] becomes a separator, except a '-'
///      with an alphanumeric on both sides; this also drops emoji and other
///      non-ASCII text
///   6. drop words with no letter (standalone numbers) and URL residue
///      containing "http"
///   7. single-space join, trimmed
/// The result is a fixpoint: cleanse(cleanse(x)) == cleanse(x).
std::string cleanse(std::string_view raw_text);

/// Whitespace split; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view clean_text);

/// Order-preserving filter of exact dictionary members.
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopwordDict& dict);

/// Full pipeline for one record; the label is left empty.
Document make_document(const TweetRecord& record, const StopwordDict& dict);
std::vector<Document> make_documents(std::span<const TweetRecord> records, const StopwordDict& dict);

}  // namespace senti::preprocess
