#include "senti/lexicon.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include "senti/csv.hpp"

namespace senti::lexicon {

LexiconOverlapError::LexiconOverlapError(std::vector<std::string> phrases)
    : ValidationError(fmt::format("phrases listed as both positive and negative: {}", join(phrases, ", "))),
      phrases_(std::move(phrases)) {}

std::string normalize_phrase(std::string_view phrase) { return collapse_whitespace(ascii_lower(phrase)); }

namespace {

std::size_t token_count(const std::string& phrase) {
  return phrase.empty() ? 0 : static_cast<std::size_t>(std::count(phrase.begin(), phrase.end(), ' ')) + 1;
}

}  // namespace

LexiconDict::LexiconDict(std::span<const std::string> positive, std::span<const std::string> negative) {
  for (const auto& p : positive) {
    auto n = normalize_phrase(p);
    if (!n.empty()) positive_.insert(std::move(n));
  }
  for (const auto& p : negative) {
    auto n = normalize_phrase(p);
    if (!n.empty()) negative_.insert(std::move(n));
  }
  std::vector<std::string> overlap;
  for (const auto& p : positive_) {
    if (negative_.contains(p)) overlap.push_back(p);
  }
  if (!overlap.empty()) {
    std::sort(overlap.begin(), overlap.end());
    throw LexiconOverlapError(std::move(overlap));
  }
  for (const auto* set : {&positive_, &negative_}) {
    for (const auto& p : *set) max_tokens_ = std::max(max_tokens_, token_count(p));
  }
}

LexiconDict LexiconDict::mirrored() const {
  LexiconDict out = *this;
  std::swap(out.positive_, out.negative_);
  return out;
}

namespace {

std::vector<std::string> read_phrases(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("lexicon file not found: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

LexiconDict load_lexicon(const std::filesystem::path& positive_path, const std::filesystem::path& negative_path) {
  const auto pos = read_phrases(positive_path);
  const auto neg = read_phrases(negative_path);
  return LexiconDict(pos, neg);
}

SentimentLabel label_for_score(int score) {
  if (score > 0) return SentimentLabel::Positive;
  if (score < 0) return SentimentLabel::Negative;
  return SentimentLabel::Neutral;
}

LexiconVerdict score_document(std::span<const std::string> tokens, const LexiconDict& dict) {
  LexiconVerdict v;
  const std::size_t max_len = dict.max_phrase_tokens();
  std::size_t i = 0;
  std::string phrase;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(max_len, tokens.size() - i); len >= 1; --len) {
      phrase = tokens[i];
      for (std::size_t k = 1; k < len; ++k) {
        phrase += ' ';
        phrase += tokens[i + k];
      }
      if (dict.positive().contains(phrase)) {
        v.matched_positive.push_back(phrase);
        matched = len;
        break;
      }
      if (dict.negative().contains(phrase)) {
        v.matched_negative.push_back(phrase);
        matched = len;
        break;
      }
    }
    i += matched ? matched : 1;
  }
  v.score = static_cast<int>(v.matched_positive.size()) - static_cast<int>(v.matched_negative.size());
  v.label = label_for_score(v.score);
  return v;
}

LabelingResult label_corpus(std::span<const Document> documents, const LexiconDict& dict,
                            const LabelOverrides* overrides) {
  LabelingResult out;
  out.documents.reserve(documents.size());
  out.worksheet.reserve(documents.size());
  std::unordered_set<std::string_view> ids;
  for (const auto& doc : documents) {
    ids.insert(doc.id);
    const auto verdict = score_document(doc.tokens, dict);
    SentimentLabel final_label = verdict.label;
    if (overrides) {
      if (auto it = overrides->find(doc.id); it != overrides->end()) final_label = it->second;
    }
    Document labeled = doc;
    labeled.label = final_label;
    out.documents.push_back(std::move(labeled));
    out.worksheet.push_back({doc.id, doc.clean_text, verdict.score, verdict.label, final_label});
  }
  if (overrides) {
    for (const auto& [id, _] : *overrides) {
      if (!ids.contains(id)) out.unknown_override_ids.push_back(id);
    }
  }
  return out;
}

void write_worksheet(const std::filesystem::path& path, std::span<const WorksheetRow> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,clean_text,score,proposed_label,final_label\n";
  for (const auto& r : rows) {
    out << csv::format_row({r.id, r.clean_text, std::to_string(r.score), std::string(to_string(r.proposed_label)),
                            std::string(to_string(r.final_label))});
  }
}

std::vector<WorksheetRow> read_worksheet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("worksheet not found: " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ValidationError(path.string() + ": empty worksheet");
  const csv::Header header(fields);
  const std::size_t cols[] = {header.index("id"), header.index("clean_text"), header.index("score"),
                              header.index("proposed_label"), header.index("final_label")};
  for (auto c : cols) {
    if (c == std::string_view::npos) {
      throw ValidationError(path.string() + ": worksheet needs id, clean_text, score, proposed_label, final_label");
    }
  }
  std::vector<WorksheetRow> rows;
  while (reader.next(fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    const auto where = fmt::format("{}:{}", path.string(), reader.record_line());
    if (fields.size() <= *std::max_element(std::begin(cols), std::end(cols))) throw ValidationError(where + ": short row");
    WorksheetRow row;
    row.id = trim(fields[cols[0]]);
    row.clean_text = fields[cols[1]];
    const std::string score = trim(fields[cols[2]]);
    auto res = std::from_chars(score.data(), score.data() + score.size(), row.score);
    if (res.ec != std::errc{} || res.ptr != score.data() + score.size()) {
      throw ValidationError(where + ": bad score '" + score + "'");
    }
    auto proposed = parse_label(fields[cols[3]]);
    auto final_label = parse_label(fields[cols[4]]);
    if (!proposed || !final_label) throw ValidationError(where + ": unrecognized label");
    row.proposed_label = *proposed;
    row.final_label = *final_label;
    rows.push_back(std::move(row));
  }
  return rows;
}

LabelOverrides load_label_overrides(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("label override file not found: " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) return {};
  const csv::Header header(fields);
  const auto id_col = header.index("id");
  const auto label_col = header.index("label");
  if (id_col == std::string_view::npos || label_col == std::string_view::npos) {
    throw ValidationError(path.string() + ": override file needs id and label columns");
  }
  LabelOverrides out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    const auto where = fmt::format("{}:{}", path.string(), reader.record_line());
    if (fields.size() <= std::max(id_col, label_col)) throw ValidationError(where + ": short row");
    auto label = parse_label(fields[label_col]);
    if (!label) throw ValidationError(where + ": unrecognized label '" + fields[label_col] + "'");
    out[trim(fields[id_col])] = *label;
  }
  return out;
}

void save_label_overrides(const std::filesystem::path& path, const LabelOverrides& overrides) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,label\n";
  for (const auto& [id, label] : overrides) out << csv::format_row({id, std::string(to_string(label))});
}

}  // namespace senti::lexicon
