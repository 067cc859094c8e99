#include <gtest/gtest.h>

#include <random>

#include "senti/preprocess.hpp"
#include "test_util.hpp"

namespace senti::preprocess {
namespace {

using senti::testing::TempDir;

TEST(Cleanse, Examples) {
  EXPECT_EQ(cleanse("Jualan saya RUGI selama PPKM!!"), "jualan saya rugi selama ppkm");
  EXPECT_EQ(cleanse("cek https://t.co/abc @menkes #PPKM"), "cek ppkm");
  EXPECT_EQ(cleanse("www.example.com buka 24 jam"), "buka jam");
  EXPECT_EQ(cleanse("anak-anak di rumah \xF0\x9F\x98\xA2"), "anak-anak di rumah");
  EXPECT_EQ(cleanse("--ppkm-- level-4"), "ppkm level-4");
  EXPECT_EQ(cleanse(""), "");
  EXPECT_EQ(cleanse("!!! 123 ..."), "");
}

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> parts{
      "PPKM", "#Jakarta", "@user_1", "https://t.co/x", "http://a.b/c?d=1", "www.x.id", "99", "a-b", "-", "!",
      "\xC3\xA9", "\xF0\x9F\x98\x80", "httpfoo", "tidak", "  ", "\t", "covid19", "x#y", "#", "@", ".", "level-4-"};
  std::string out;
  const int n = static_cast<int>(rng() % 10);
  for (int i = 0; i < n; ++i) {
    out += parts[rng() % parts.size()];
    if (rng() % 2) out += ' ';
  }
  return out;
}

TEST(Cleanse, IsIdempotentAndStripsMarkup) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const auto raw = random_text(rng);
    const auto once = cleanse(raw);
    EXPECT_EQ(cleanse(once), once) << raw;
    for (const auto& tok : tokenize(once)) {
      EXPECT_EQ(tok.find('#'), std::string::npos) << raw;
      EXPECT_EQ(tok.find('@'), std::string::npos) << raw;
      EXPECT_EQ(tok.find("http"), std::string::npos) << raw;
      EXPECT_FALSE(tok.empty());
      for (char c : tok) EXPECT_TRUE((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-') << raw;
    }
  }
}

TEST(Tokenize, NoEmptyTokens) {
  EXPECT_EQ(tokenize("  a  b\tc "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(Stopwords, LoadAndFilter) {
  TempDir dir;
  auto p = dir.write("s.txt", "# source: unit list\nYang\n\ndi\n# comment\n");
  auto dict = load_stopwords(p);
  EXPECT_EQ(dict.source_name, "unit list");
  EXPECT_EQ(dict.words.size(), 2u);
  const std::vector<std::string> toks{"ppkm", "yang", "di", "jakarta", "di"};
  EXPECT_EQ(remove_stopwords(toks, dict), (std::vector<std::string>{"ppkm", "jakarta"}));
  EXPECT_THROW(load_stopwords(dir.write("bad.txt", "dua kata\n")), ValidationError);
  EXPECT_THROW(load_stopwords(dir.path() / "missing.txt"), ValidationError);
  EXPECT_EQ(load_stopwords(dir.write("plain.txt", "x\n")).source_name, "plain.txt");
}

TEST(Stopwords, FilterKeepsOrderAndOnlyDropsMembers) {
  StopwordDict dict{{"a", "c"}, "t"};
  std::mt19937_64 rng(2);
  const std::vector<std::string> alphabet{"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> toks;
    for (int k = static_cast<int>(rng() % 8); k > 0; --k) toks.push_back(alphabet[rng() % 4]);
    std::vector<std::string> want;
    for (auto& t : toks) {
      if (t != "a" && t != "c") want.push_back(t);
    }
    EXPECT_EQ(remove_stopwords(toks, dict), want);
  }
}

TEST(Stopwords, BundledListKeepsLexiconWordsAndNegations) {
  auto dict = load_stopwords(senti::testing::source_dir() / "data/stopwords_id.txt");
  EXPECT_GT(dict.words.size(), 50u);
  for (const char* w : {"dengan", "dapat", "daya", "tidak", "enggak", "ppkm"}) EXPECT_FALSE(dict.contains(w)) << w;
  EXPECT_TRUE(dict.contains("yang"));
}

TEST(MakeDocument, FullPipeline) {
  StopwordDict dict{{"saya", "selama"}, "t"};
  TweetRecord r;
  r.id = "1";
  r.text = "Jualan saya RUGI selama PPKM!!";
  auto d = make_document(r, dict);
  EXPECT_EQ(d.id, "1");
  EXPECT_EQ(d.raw_text, r.text);
  EXPECT_EQ(d.clean_text, "jualan saya rugi selama ppkm");
  EXPECT_EQ(d.tokens, (std::vector<std::string>{"jualan", "rugi", "ppkm"}));
  EXPECT_FALSE(d.label);
}

}  // namespace
}  // namespace senti::preprocess
