#include "senti/bow.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace senti::bow {

std::optional<std::size_t> BowVocab::index_of(const std::string& token) const {
  auto it = token_to_index.find(token);
  if (it == token_to_index.end()) return std::nullopt;
  return it->second;
}

BowVocab build_vocab(std::span<const Document> train, std::size_t min_count) {
  if (train.empty()) throw ValidationError("cannot build a vocabulary from an empty training set");
  if (min_count == 0) throw ValidationError("min_count must be at least 1");

  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, df
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : train) {
    seen.clear();
    for (const auto& t : doc.tokens) {
      auto& s = stats[t];
      ++s.first;
      if (seen.insert(t).second) ++s.second;
    }
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> entries;
  for (auto& [tok, s] : stats) {
    if (s.first >= min_count) entries.emplace_back(tok, s);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.first < b.first;
  });

  BowVocab v;
  v.num_documents = train.size();
  for (auto& [tok, s] : entries) {
    v.token_to_index.emplace(tok, v.tokens.size());
    v.tokens.push_back(tok);
    v.counts.push_back(s.first);
    v.document_frequency.push_back(s.second);
  }
  return v;
}

nlohmann::json vocab_to_json(const BowVocab& vocab) {
  return {{"tokens", vocab.tokens},
          {"counts", vocab.counts},
          {"document_frequency", vocab.document_frequency},
          {"num_documents", vocab.num_documents}};
}

BowVocab vocab_from_json(const nlohmann::json& j) {
  BowVocab v;
  v.tokens = j.at("tokens").get<std::vector<std::string>>();
  v.counts = j.at("counts").get<std::vector<std::size_t>>();
  v.document_frequency = j.at("document_frequency").get<std::vector<std::size_t>>();
  v.num_documents = j.at("num_documents").get<std::size_t>();
  if (v.counts.size() != v.tokens.size() || v.document_frequency.size() != v.tokens.size()) {
    throw ValidationError("vocabulary arrays have mismatched lengths");
  }
  for (std::size_t i = 0; i < v.tokens.size(); ++i) {
    if (!v.token_to_index.emplace(v.tokens[i], i).second) {
      throw ValidationError("duplicate vocabulary token '" + v.tokens[i] + "'");
    }
  }
  return v;
}

std::string_view to_string(FeatureMode mode) { return mode == FeatureMode::Tf ? "tf" : "tfidf"; }

std::optional<FeatureMode> parse_feature_mode(std::string_view text) {
  const std::string t = ascii_lower(trim(text));
  if (t == "tf") return FeatureMode::Tf;
  if (t == "tfidf" || t == "tf-idf") return FeatureMode::TfIdf;
  return std::nullopt;
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const auto& [i, x] : entries) s += dense[i] * x;
  return s;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [i, x] : entries) s += x * x;
  return s;
}

SparseVector SparseVector::scaled(double k) const {
  SparseVector out = *this;
  for (auto& e : out.entries) e.second *= k;
  return out;
}

double idf(const BowVocab& vocab, std::size_t index) {
  return std::log((1.0 + static_cast<double>(vocab.num_documents)) /
                  (1.0 + static_cast<double>(vocab.document_frequency[index]))) +
         1.0;
}

SparseVector vectorize(std::span<const std::string> tokens, const BowVocab& vocab, FeatureMode mode) {
  std::map<std::size_t, double> counts;
  for (const auto& t : tokens) {
    if (auto idx = vocab.index_of(t)) counts[*idx] += 1.0;
  }
  SparseVector v;
  v.entries.assign(counts.begin(), counts.end());
  if (mode == FeatureMode::TfIdf && !v.empty()) {
    for (auto& [i, x] : v.entries) x *= idf(vocab, i);
    const double norm = std::sqrt(v.squared_norm());
    for (auto& e : v.entries) e.second /= norm;
  }
  return v;
}

std::vector<SentimentLabel> require_labels(std::span<const Document> docs) {
  std::vector<SentimentLabel> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    if (!d.label) throw ValidationError(fmt::format("training document '{}' has no label", d.id));
    out.push_back(*d.label);
  }
  return out;
}

}  // namespace senti::bow
