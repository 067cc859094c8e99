#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "senti/common.hpp"

namespace senti::encoder {

using TokenId = std::uint32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kClsId = 2;
inline constexpr TokenId kSepId = 3;
inline constexpr TokenId kFirstContentId = 4;

/// Word-level vocabulary with the reserved ids [PAD]=0, [UNK]=1, [CLS]=2,
/// [SEP]=3 followed by content tokens.
class TokenVocab {
 public:
  TokenVocab();
  /// `tokens` is the full id-ordered list, reserved tokens included.
  explicit TokenVocab(std::vector<std::string> tokens);

  TokenId id_of(const std::string& token) const;
  const std::string& token_of(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const TokenVocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Reserved tokens first, then tokens with count >= min_count by descending
/// frequency, ties lexicographic.
TokenVocab build_token_vocab(std::span<const Document> train, std::size_t min_count = 1);

/// One token per line in id order.
void save_token_vocab(const std::filesystem::path& path, const TokenVocab& vocab);
TokenVocab load_token_vocab(const std::filesystem::path& path);

struct EncodedInput {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> attention_mask;

  bool operator==(const EncodedInput&) const = default;
};

/// [CLS], up to S-2 token ids, [SEP], then [PAD] up to length S. The mask is
/// 1 on every non-pad position. Throws ValidationError when S < 3.
EncodedInput format_input(std::span<const std::string> tokens, const TokenVocab& vocab, std::size_t max_length);

}  // namespace senti::encoder
