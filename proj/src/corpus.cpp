#include "senti/corpus.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "senti/csv.hpp"
#include "senti/random.hpp"

namespace senti::corpus {

using nlohmann::json;

std::optional<RecordFormat> parse_format(std::string_view name) {
  const std::string n = ascii_lower(name);
  if (n == "jsonl" || n == "json" || n == "ndjson") return RecordFormat::Jsonl;
  if (n == "csv") return RecordFormat::Csv;
  return std::nullopt;
}

std::optional<RecordFormat> format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  if (!ext.empty() && ext[0] == '.') ext.erase(0, 1);
  return parse_format(ext);
}

std::vector<std::string> matched_keywords(std::string_view text, std::span<const std::string> keywords) {
  const std::string lowered = ascii_lower(text);
  std::vector<std::string> out;
  for (const auto& kw : keywords) {
    std::string k = ascii_lower(trim(kw));
    if (k.empty()) continue;
    if (lowered.find(k) != std::string::npos &&
        std::find(out.begin(), out.end(), k) == out.end()) {
      out.push_back(std::move(k));
    }
  }
  return out;
}

namespace {

class RecordChecker {
 public:
  /// Returns an error message for a record that must not be emitted.
  std::optional<std::string> check(const TweetRecord& rec, std::size_t line) {
    if (rec.id.empty()) return "empty id";
    auto [it, inserted] = first_line_.emplace(rec.id, line);
    if (!inserted) {
      return fmt::format("duplicate id '{}' on lines {} and {}", rec.id, it->second, line);
    }
    return std::nullopt;
  }

 private:
  std::unordered_map<std::string, std::size_t> first_line_;
};

std::optional<std::string> read_jsonl_row(const std::string& line, TweetRecord& rec) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    return fmt::format("unparseable JSON: {}", e.what());
  }
  if (!obj.is_object()) return "row is not a JSON object";
  auto id = obj.find("id");
  if (id == obj.end()) return "missing id";
  if (id->is_string()) {
    rec.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    rec.id = id->dump();
  } else {
    return "id must be a string or integer";
  }
  auto text = obj.find("text");
  if (text == obj.end()) return "missing text";
  if (!text->is_string()) return "text must be a string";
  rec.text = text->get<std::string>();
  auto created = obj.find("created_at");
  if (created != obj.end() && !created->is_null()) {
    if (!created->is_string()) return "created_at must be an RFC 3339 string";
    rec.created_at = parse_rfc3339(created->get<std::string>());
    if (!rec.created_at) return fmt::format("invalid created_at '{}'", created->get<std::string>());
  }
  return std::nullopt;
}

}  // namespace

void for_each_record(const std::filesystem::path& path, RecordFormat format,
                     const std::function<void(TweetRecord&&, std::size_t line)>& on_record,
                     const std::function<void(LineError&&)>& on_error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("corpus file not found: {}", path.string()));
  RecordChecker checker;

  auto emit = [&](TweetRecord&& rec, std::size_t line) {
    if (auto err = checker.check(rec, line)) {
      on_error({line, *err});
      return;
    }
    on_record(std::move(rec), line);
  };

  if (format == RecordFormat::Jsonl) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      TweetRecord rec;
      if (auto err = read_jsonl_row(line, rec)) {
        on_error({lineno, *err});
        continue;
      }
      emit(std::move(rec), lineno);
    }
    return;
  }

  csv::Reader reader(in);
  std::vector<std::string> fields;
  try {
    if (!reader.next(fields)) throw ValidationError(fmt::format("{}: empty CSV file", path.string()));
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  const csv::Header header(fields);
  const std::size_t id_col = header.index("id");
  const std::size_t text_col = header.index("text");
  const std::size_t created_col = header.index("created_at");
  if (id_col == std::string_view::npos || text_col == std::string_view::npos) {
    throw ValidationError(fmt::format("{}: CSV header must contain id and text columns", path.string()));
  }
  while (true) {
    try {
      if (!reader.next(fields)) break;
    } catch (const Error& e) {
      on_error({reader.record_line(), e.what()});
      break;
    }
    const std::size_t lineno = reader.record_line();
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() <= id_col) {
      on_error({lineno, "missing id column"});
      continue;
    }
    if (fields.size() <= text_col) {
      on_error({lineno, "missing text column"});
      continue;
    }
    TweetRecord rec;
    rec.id = trim(fields[id_col]);
    rec.text = fields[text_col];
    if (created_col != std::string_view::npos && created_col < fields.size() && !trim(fields[created_col]).empty()) {
      rec.created_at = parse_rfc3339(trim(fields[created_col]));
      if (!rec.created_at) {
        on_error({lineno, fmt::format("invalid created_at '{}'", fields[created_col])});
        continue;
      }
    }
    emit(std::move(rec), lineno);
  }
}

IngestResult ingest_file(const std::filesystem::path& path, RecordFormat format,
                         std::span<const std::string> keywords) {
  IngestResult result;
  for_each_record(
      path, format,
      [&](TweetRecord&& rec, std::size_t) {
        ++result.rows_read;
        if (!keywords.empty()) rec.matched_keywords = matched_keywords(rec.text, keywords);
        result.records.push_back(std::move(rec));
      },
      [&](LineError&& err) {
        ++result.rows_read;
        result.errors.push_back(std::move(err));
      });
  return result;
}

void write_jsonl(const std::filesystem::path& path, std::span<const TweetRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    obj["id"] = r.id;
    obj["text"] = r.text;
    if (r.created_at) obj["created_at"] = format_rfc3339(*r.created_at);
    if (!r.matched_keywords.empty()) obj["matched_keywords"] = r.matched_keywords;
    out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

// ---------------------------------------------------------------------------

std::string normalize_for_dedupe(std::string_view text) { return collapse_whitespace(ascii_lower(text)); }

DedupeResult dedupe(std::span<const TweetRecord> records, DedupeKey key) {
  DedupeResult result;
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    std::string k = key == DedupeKey::Id ? rec.id : normalize_for_dedupe(rec.text);
    if (seen.insert(std::move(k)).second) {
      result.kept.push_back(rec);
    } else {
      result.removed.push_back(rec);
    }
  }
  return result;
}

std::string_view to_string(Verdict v) { return v == Verdict::Keep ? "keep" : "drop"; }

std::optional<Verdict> parse_verdict(std::string_view text) {
  const std::string t = ascii_lower(trim(text));
  if (t == "keep" || t == "k") return Verdict::Keep;
  if (t == "drop" || t == "d") return Verdict::Drop;
  return std::nullopt;
}

VerdictMap load_verdicts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("verdict file not found: " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) return {};
  const csv::Header header(fields);
  const auto id_col = header.index("id");
  const auto verdict_col = header.index("verdict");
  if (id_col == std::string_view::npos || verdict_col == std::string_view::npos) {
    throw ValidationError(path.string() + ": verdict file needs id and verdict columns");
  }
  VerdictMap out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() <= std::max(id_col, verdict_col)) {
      throw ValidationError(fmt::format("{}:{}: short row", path.string(), reader.record_line()));
    }
    auto v = parse_verdict(fields[verdict_col]);
    if (!v) {
      throw ValidationError(
          fmt::format("{}:{}: verdict must be keep or drop, got '{}'", path.string(), reader.record_line(),
                      fields[verdict_col]));
    }
    out[trim(fields[id_col])] = *v;
  }
  return out;
}

void save_verdicts(const std::filesystem::path& path, const VerdictMap& verdicts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,verdict\n";
  for (const auto& [id, v] : verdicts) out << csv::format_row({id, std::string(to_string(v))});
}

RelevanceResult filter_relevant(std::span<const TweetRecord> records, std::span<const std::string> keywords,
                                const VerdictMap* verdicts, KeywordMatch mode) {
  std::size_t usable = 0;
  for (const auto& k : keywords) usable += trim(k).empty() ? 0 : 1;
  if (usable == 0) throw ValidationError("filter_relevant needs at least one keyword");

  RelevanceResult result;
  std::unordered_set<std::string_view> ids;
  for (const auto& rec : records) {
    ids.insert(rec.id);
    auto matched = matched_keywords(rec.text, keywords);
    bool keep = mode == KeywordMatch::Any ? !matched.empty() : matched.size() == usable;
    const bool keyword_keep = keep;
    if (verdicts) {
      if (auto it = verdicts->find(rec.id); it != verdicts->end()) keep = it->second == Verdict::Keep;
    }
    if (keep) {
      if (!keyword_keep) ++result.kept_by_verdict;
      TweetRecord copy = rec;
      copy.matched_keywords = std::move(matched);
      result.kept.push_back(std::move(copy));
    } else if (keyword_keep) {
      ++result.dropped_by_verdict;
    } else {
      ++result.dropped_by_keyword;
    }
  }
  if (verdicts) {
    for (const auto& [id, _] : *verdicts) {
      if (!ids.contains(id)) result.unknown_verdict_ids.push_back(id);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

Fraction Fraction::parse(std::string_view text) {
  const std::string t = trim(text);
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 0) {
      throw ValidationError(fmt::format("invalid fraction '{}'", t));
    }
    return v;
  };
  Fraction f;
  if (auto slash = t.find('/'); slash != std::string::npos) {
    f.num = parse_int(std::string_view(t).substr(0, slash));
    f.den = parse_int(std::string_view(t).substr(slash + 1));
  } else {
    const auto dot = t.find('.');
    const std::string whole = dot == std::string::npos ? t : t.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : t.substr(dot + 1);
    if (frac.size() > 15 || (whole.empty() && frac.empty())) throw ValidationError(fmt::format("invalid fraction '{}'", t));
    f.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) f.den *= 10;
    f.num = (whole.empty() ? 0 : parse_int(whole)) * f.den + (frac.empty() ? 0 : parse_int(frac));
  }
  if (f.den == 0) throw ValidationError(fmt::format("zero denominator in '{}'", t));
  const auto g = std::gcd(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

std::string Fraction::str() const { return den == 1 ? std::to_string(num) : fmt::format("{}/{}", num, den); }

void SplitSpec::validate() const {
  for (const Fraction* f : {&train, &validation, &test}) {
    if (f->den <= 0 || f->num < 0 || f->num > f->den) {
      throw ValidationError(fmt::format("split fraction {} is outside [0,1]", f->str()));
    }
  }
  const double sum = train.value() + validation.value() + test.value();
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError(fmt::format("split fractions sum to {} instead of 1", sum));
  }
}

SplitSpec SplitSpec::reference_proportions(std::uint64_t seed, bool stratified) {
  return SplitSpec{{4877, 5315}, {293, 5315}, {145, 5315}, seed, stratified};
}

namespace {

std::size_t floor_share(std::size_t n, const Fraction& f) {
  const auto prod = static_cast<unsigned __int128>(n) * static_cast<unsigned __int128>(f.num);
  return static_cast<std::size_t>(prod / static_cast<unsigned __int128>(f.den));
}

}  // namespace

SplitSizes split_sizes(std::size_t n, const SplitSpec& spec) {
  SplitSizes s;
  s.validation = floor_share(n, spec.validation);
  s.test = floor_share(n, spec.test);
  s.train = n - s.validation - s.test;
  return s;
}

Split split(std::span<const Document> documents, const SplitSpec& spec) {
  spec.validate();
  if (documents.empty()) throw ValidationError("cannot split an empty document list");
  const bool all_positive = spec.train.num > 0 && spec.validation.num > 0 && spec.test.num > 0;
  if (all_positive && documents.size() < 3) {
    throw ValidationError("need at least 3 documents when every split fraction is positive");
  }

  // 0 = train, 1 = validation, 2 = test, indexed by input position.
  std::vector<int> bucket(documents.size(), 0);
  std::mt19937_64 rng(spec.seed);
  auto assign = [&](std::vector<std::size_t>& idx) {
    shuffle_in_place(std::span<std::size_t>(idx), rng);
    const SplitSizes sizes = split_sizes(idx.size(), spec);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      bucket[idx[k]] = k < sizes.train ? 0 : (k < sizes.train + sizes.validation ? 1 : 2);
    }
  };

  if (spec.stratified) {
    std::array<std::vector<std::size_t>, kNumClasses> groups;
    for (std::size_t i = 0; i < documents.size(); ++i) {
      if (!documents[i].label) {
        throw ValidationError(fmt::format("stratified split needs labels; document '{}' has none", documents[i].id));
      }
      groups[class_index(*documents[i].label)].push_back(i);
    }
    for (auto& g : groups) assign(g);
  } else {
    std::vector<std::size_t> idx(documents.size());
    std::iota(idx.begin(), idx.end(), 0);
    assign(idx);
  }

  Split out;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    (bucket[i] == 0 ? out.train : bucket[i] == 1 ? out.validation : out.test).push_back(documents[i]);
  }
  return out;
}

}  // namespace senti::corpus
