#include "senti/encoder/token_vocab.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace senti::encoder {

namespace {
const std::vector<std::string> kReserved = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
}

TokenVocab::TokenVocab() : TokenVocab(kReserved) {}

TokenVocab::TokenVocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < kReserved.size() || !std::equal(kReserved.begin(), kReserved.end(), tokens_.begin())) {
    throw ValidationError("token vocabulary must start with [PAD], [UNK], [CLS], [SEP]");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw ValidationError(fmt::format("duplicate token '{}' in vocabulary", tokens_[i]));
    }
  }
}

TokenId TokenVocab::id_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end() || it->second < kFirstContentId) return kUnkId;
  return it->second;
}

TokenVocab build_token_vocab(std::span<const Document> train, std::size_t min_count) {
  if (train.empty()) throw ValidationError("cannot build a token vocabulary from an empty corpus");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& d : train) {
    for (const auto& t : d.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> entries;
  for (auto& [tok, n] : counts) {
    const bool reserved = std::find(kReserved.begin(), kReserved.end(), tok) != kReserved.end();
    if (n >= std::max<std::size_t>(min_count, 1) && !reserved) entries.emplace_back(tok, n);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens = kReserved;
  for (auto& e : entries) tokens.push_back(std::move(e.first));
  return TokenVocab(std::move(tokens));
}

void save_token_vocab(const std::filesystem::path& path, const TokenVocab& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& t : vocab.tokens()) out << t << '\n';
}

TokenVocab load_token_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("token vocabulary not found: " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return TokenVocab(std::move(tokens));
}

EncodedInput format_input(std::span<const std::string> tokens, const TokenVocab& vocab, std::size_t max_length) {
  if (max_length < 3) throw ValidationError("max sequence length must be at least 3");
  EncodedInput out;
  out.ids.assign(max_length, kPadId);
  out.attention_mask.assign(max_length, 0);
  const std::size_t kept = std::min(tokens.size(), max_length - 2);
  out.ids[0] = kClsId;
  for (std::size_t i = 0; i < kept; ++i) out.ids[i + 1] = vocab.id_of(tokens[i]);
  out.ids[kept + 1] = kSepId;
  std::fill(out.attention_mask.begin(), out.attention_mask.begin() + static_cast<std::ptrdiff_t>(kept + 2), 1);
  return out;
}

}  // namespace senti::encoder
