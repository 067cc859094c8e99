#include "senti/pipeline/review.hpp"

#include <fmt/format.h>

#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>

#include "senti/common.hpp"
#include "senti/corpus.hpp"
#include "senti/hash.hpp"
#include "senti/lexicon.hpp"

namespace senti::pipeline {

std::string_view to_string(ReviewMode mode) { return mode == ReviewMode::Relevance ? "relevance" : "labels"; }

namespace {

nlohmann::ordered_json progress_body(const ReviewProgress& p) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["mode"] = std::string(to_string(p.mode));
  j["source_sha256"] = p.source_sha256;
  nlohmann::ordered_json d = nlohmann::ordered_json::array();
  for (const auto& [id, value] : p.decisions) d.push_back({id, value});
  j["decisions"] = std::move(d);
  return j;
}

void save_progress(const std::filesystem::path& path, const ReviewProgress& p) {
  // Write then rename so an interrupted write never leaves a torn file.
  auto tmp = path;
  tmp += ".tmp";
  write_text_file(tmp, progress_to_json(p));
  std::filesystem::rename(tmp, path);
}

void write_output(ReviewMode mode, std::span<const ReviewItem> items, const ReviewProgress& p,
                  const std::filesystem::path& output_path) {
  std::map<std::string, std::string> proposed;
  for (const auto& it : items) proposed.emplace(it.id, it.proposed);
  if (mode == ReviewMode::Relevance) {
    corpus::VerdictMap verdicts;
    for (const auto& [id, value] : p.decisions) {
      if (value != proposed.at(id)) verdicts[id] = *corpus::parse_verdict(value);
    }
    corpus::save_verdicts(output_path, verdicts);
  } else {
    lexicon::LabelOverrides overrides;
    for (const auto& [id, value] : p.decisions) {
      if (value != proposed.at(id)) overrides[id] = *parse_label(value);
    }
    lexicon::save_label_overrides(output_path, overrides);
  }
}

ReviewProgress load_or_start(ReviewMode mode, std::span<const ReviewItem> items, const std::string& source_sha256,
                             const std::filesystem::path& progress_path) {
  ReviewProgress p{mode, source_sha256, {}};
  if (!std::filesystem::exists(progress_path)) return p;
  p = progress_from_json(read_text_file(progress_path), progress_path.string());
  if (p.mode != mode) {
    throw ValidationError(fmt::format("progress file '{}' belongs to a {} review", progress_path.string(),
                                      to_string(p.mode)));
  }
  if (p.source_sha256 != source_sha256) {
    throw ValidationError(fmt::format(
        "progress file '{}' was recorded against different input; rerun review with --reset to start over",
        progress_path.string()));
  }
  if (p.decisions.size() > items.size()) {
    throw ValidationError(fmt::format("progress file '{}' has more decisions than items", progress_path.string()));
  }
  for (std::size_t i = 0; i < p.decisions.size(); ++i) {
    if (p.decisions[i].first != items[i].id) {
      throw ValidationError(fmt::format("progress file '{}' is out of step with the items at position {}",
                                        progress_path.string(), i + 1));
    }
  }
  return p;
}

std::optional<std::string> interpret(ReviewMode mode, const std::string& answer, const ReviewItem& item) {
  const std::string a = ascii_lower(trim(answer));
  if (a.empty()) return item.proposed;
  if (mode == ReviewMode::Relevance) {
    if (a == "k" || a == "keep") return std::string("keep");
    if (a == "d" || a == "drop") return std::string("drop");
    return std::nullopt;
  }
  if (auto label = parse_label(a)) return std::string(to_string(*label));
  return std::nullopt;
}

}  // namespace

std::string progress_to_json(const ReviewProgress& progress) {
  auto j = progress_body(progress);
  j["checksum"] = sha256_hex(j.dump());
  return j.dump(2) + "\n";
}

ReviewProgress progress_from_json(std::string_view text, std::string_view source) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(fmt::format("progress file '{}' is corrupt: not valid JSON", source));
  }
  try {
    const std::string checksum = j.at("checksum").get<std::string>();
    j.erase("checksum");
    if (sha256_hex(j.dump()) != checksum) {
      throw ValidationError(fmt::format("progress file '{}' is corrupt: checksum mismatch", source));
    }
    ReviewProgress p;
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "relevance" && mode != "labels") throw ValidationError("bad mode");
    p.mode = mode == "relevance" ? ReviewMode::Relevance : ReviewMode::Labels;
    p.source_sha256 = j.at("source_sha256").get<std::string>();
    for (const auto& d : j.at("decisions")) p.decisions.emplace_back(d.at(0).get<std::string>(), d.at(1).get<std::string>());
    return p;
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(fmt::format("progress file '{}' is corrupt: missing or mistyped fields", source));
  }
}

ReviewOutcome run_review(ReviewMode mode, std::span<const ReviewItem> items, const std::string& source_sha256,
                         const std::filesystem::path& progress_path, const std::filesystem::path& output_path,
                         std::istream& in, std::ostream& out) {
  ReviewProgress p = load_or_start(mode, items, source_sha256, progress_path);
  const std::string help = mode == ReviewMode::Relevance ? "[k]eep [d]rop, enter accepts, q quits"
                                                         : "[n]egative ne[u]tral [p]ositive, enter accepts, q quits";
  if (!p.decisions.empty() && p.decisions.size() < items.size()) {
    out << fmt::format("resuming at record {} of {}\n", p.decisions.size() + 1, items.size());
  }
  while (p.decisions.size() < items.size()) {
    const ReviewItem& item = items[p.decisions.size()];
    out << fmt::format("\n[{}/{}] {}\n  {}\n  proposed: {}  ({})\n> ", p.decisions.size() + 1, items.size(), item.id,
                       item.text, item.proposed, help);
    out.flush();
    std::string line;
    if (!std::getline(in, line)) break;
    if (ascii_lower(trim(line)) == "q") break;
    auto decision = interpret(mode, line, item);
    if (!decision) {
      out << "  unrecognized answer\n";
      continue;
    }
    p.decisions.emplace_back(item.id, *decision);
    save_progress(progress_path, p);
    write_output(mode, items, p, output_path);
  }
  if (p.decisions.size() == items.size()) {
    // Makes the output exist even for an empty item list or a no-op resume.
    write_output(mode, items, p, output_path);
    out << fmt::format("\nreview complete: {} records\n", items.size());
  } else {
    out << fmt::format("\nstopped after {} of {} records; rerun review to resume\n", p.decisions.size(), items.size());
  }
  return {p.decisions.size(), items.size()};
}

ReviewOutcome import_review(ReviewMode mode, std::span<const ReviewItem> items, const std::string& source_sha256,
                            const std::filesystem::path& import_path, const std::filesystem::path& progress_path,
                            const std::filesystem::path& output_path) {
  std::map<std::string, std::string> imported;
  if (mode == ReviewMode::Labels) {
    for (const auto& row : lexicon::read_worksheet(import_path)) {
      imported[row.id] = std::string(to_string(row.final_label));
    }
  } else {
    for (const auto& [id, v] : corpus::load_verdicts(import_path)) imported[id] = std::string(corpus::to_string(v));
  }
  std::map<std::string, const ReviewItem*> by_id;
  for (const auto& it : items) by_id.emplace(it.id, &it);
  for (const auto& [id, v] : imported) {
    if (!by_id.contains(id)) {
      throw ValidationError(fmt::format("{}: id '{}' is not among the records under review", import_path.string(), id));
    }
  }
  ReviewProgress p{mode, source_sha256, {}};
  for (const auto& it : items) {
    auto found = imported.find(it.id);
    p.decisions.emplace_back(it.id, found == imported.end() ? it.proposed : found->second);
  }
  save_progress(progress_path, p);
  write_output(mode, items, p, output_path);
  return {items.size(), items.size()};
}

}  // namespace senti::pipeline
