#include "senti/fixture.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <random>
#include <unordered_set>

#include "senti/corpus.hpp"
#include "senti/random.hpp"

namespace senti::fixture {

const WordPools& word_pools() {
  static const WordPools pools{
      {"bersyukur", "dermawan", "baik", "bagus", "senang", "bahagia", "sehat", "aman", "lancar", "mantap", "hebat",
       "semangat", "sukses", "puas", "sembuh", "pulih", "optimis", "gembira"},
      {"basi", "bau", "beban", "rugi", "buruk", "susah", "sulit", "sedih", "kecewa", "marah", "kesal", "takut",
       "gagal", "bangkrut", "parah", "capek", "sakit", "stres"},
      {"jalan", "kantor", "pasar", "rumah", "vaksin", "warga", "kota", "mobil", "kereta", "sekolah", "berita",
       "informasi", "jadwal", "wilayah", "level", "aturan", "kebijakan", "posko"},
      {"pemerintah", "enggak"},
      {"yang", "di", "dan", "ini", "itu", "saya", "untuk", "sudah", "juga", "karena"},
  };
  return pools;
}

namespace {

const std::vector<std::string> kOffTopic = {"cuaca", "cerah", "bandung", "hujan", "sepak", "bola", "musik",
                                            "konser", "kopi", "kucing", "liburan", "pantai", "film", "buku"};

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[static_cast<std::size_t>(uniform_below(rng, v.size()))];
}

bool chance(std::mt19937_64& rng, double p) { return uniform_unit(rng) < p; }

std::string upper(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

const std::vector<std::string>& pool_for(SentimentLabel label) {
  const auto& p = word_pools();
  switch (label) {
    case SentimentLabel::Negative:
      return p.negative;
    case SentimentLabel::Neutral:
      return p.neutral;
    case SentimentLabel::Positive:
      break;
  }
  return p.positive;
}

// Content tokens: one topical keyword, covid once or twice, two or three
// class words, and optional shared fillers, in shuffled order.
std::vector<std::string> content_tokens(SentimentLabel label, std::mt19937_64& rng) {
  const auto& pools = word_pools();
  std::vector<std::string> tokens;
  tokens.push_back(chance(rng, 0.85) ? "ppkm" : "jakarta");
  tokens.push_back("covid");
  if (chance(rng, 0.25)) tokens.push_back("covid");
  const std::size_t k = 2 + static_cast<std::size_t>(uniform_below(rng, 2));
  for (std::size_t i = 0; i < k; ++i) tokens.push_back(pick(pool_for(label), rng));
  for (const auto& w : pools.shared) {
    if (chance(rng, 0.4)) tokens.push_back(w);
  }
  shuffle_in_place(std::span<std::string>(tokens), rng);
  return tokens;
}

std::string decorate(const std::vector<std::string>& tokens, std::mt19937_64& rng) {
  const auto& pools = word_pools();
  std::string text;
  if (chance(rng, 0.25)) text += fmt::format("@warga_{} ", uniform_below(rng, 1000));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i && chance(rng, 0.5)) text += pick(pools.glue, rng) + " ";
    std::string t = tokens[i];
    if (t == "ppkm" && chance(rng, 0.3)) {
      t = "#PPKM";
    } else if (chance(rng, 0.15)) {
      t = upper(t);
    }
    text += t;
    if (chance(rng, 0.1)) text += chance(rng, 0.5) ? "!" : "...";
    text += ' ';
  }
  if (chance(rng, 0.3)) text += fmt::format("https://t.co/{:x}", uniform_below(rng, 1u << 30));
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

}  // namespace

Corpus generate(const FixtureOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<SentimentLabel> labels;
  for (auto label : kAllLabels) labels.insert(labels.end(), options.per_class, label);
  shuffle_in_place(std::span<SentimentLabel>(labels), rng);

  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::vector<TweetRecord> unique_raw;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::vector<std::string> tokens;
    std::string text;
    do {
      tokens = content_tokens(labels[i], rng);
      text = decorate(tokens, rng);
    } while (!seen.insert(corpus::normalize_for_dedupe(join(tokens, " "))).second);
    Document doc;
    doc.id = fmt::format("t{:05}", i + 1);
    doc.raw_text = text;
    doc.clean_text = join(tokens, " ");
    doc.tokens = std::move(tokens);
    doc.label = labels[i];
    TweetRecord rec;
    rec.id = doc.id;
    rec.text = text;
    unique_raw.push_back(rec);
    corpus.documents.push_back(std::move(doc));
  }

  // Interleave duplicates and off-topic posts at random positions while the
  // unique posts keep their relative order.
  std::vector<int> kinds(unique_raw.size(), 0);
  kinds.insert(kinds.end(), options.duplicates, 1);
  kinds.insert(kinds.end(), options.irrelevant, 2);
  shuffle_in_place(std::span<int>(kinds), rng);
  std::size_t next_unique = 0, extra = 0;
  const Timestamp base = *parse_rfc3339("2021-07-03T00:00:00Z");
  for (std::size_t pos = 0; pos < kinds.size(); ++pos) {
    TweetRecord rec;
    if (kinds[pos] == 0 || (kinds[pos] == 1 && next_unique == 0)) {
      // A duplicate needs an earlier post to copy; fall back to the next unique one.
      if (kinds[pos] == 1) std::swap(kinds[pos], *std::find(kinds.begin() + pos, kinds.end(), 0));
      rec = unique_raw[next_unique++];
    } else if (kinds[pos] == 1) {
      const auto& src = unique_raw[static_cast<std::size_t>(uniform_below(rng, next_unique))];
      rec.id = fmt::format("d{:05}", ++extra);
      rec.text = upper(src.text.substr(0, 1)) + src.text.substr(1) + "  ";
    } else {
      std::vector<std::string> words;
      for (int w = 0; w < 5; ++w) words.push_back(pick(kOffTopic, rng));
      rec.id = fmt::format("x{:05}", ++extra);
      rec.text = join(words, " ");
    }
    rec.created_at = base + std::chrono::seconds(97 * static_cast<std::int64_t>(pos));
    corpus.raw.push_back(std::move(rec));
  }
  return corpus;
}

}  // namespace senti::fixture
