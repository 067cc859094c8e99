#include <gtest/gtest.h>

#include <set>

#include "senti/corpus.hpp"
#include "senti/fixture.hpp"
#include "senti/lexicon.hpp"
#include "senti/preprocess.hpp"
#include "test_util.hpp"

namespace senti::fixture {
namespace {

using senti::testing::source_dir;

TEST(Fixture, ShapeAndDeterminism) {
  const auto c = generate();
  EXPECT_EQ(c.raw.size(), 660u);
  EXPECT_EQ(c.documents.size(), 600u);
  std::array<int, 3> per{};
  for (const auto& d : c.documents) ++per[class_index(*d.label)];
  EXPECT_EQ(per, (std::array<int, 3>{200, 200, 200}));
  const auto again = generate();
  EXPECT_EQ(again.raw, c.raw);
  EXPECT_EQ(again.documents, c.documents);
  FixtureOptions other;
  other.seed = 1;
  EXPECT_NE(generate(other).raw, c.raw);
}

TEST(Fixture, ClassPoolsAreDisjointAndLexiconConsistent) {
  const auto& p = word_pools();
  const auto dict = lexicon::load_lexicon(source_dir() / "data/lexicon/positive.txt",
                                          source_dir() / "data/lexicon/negative.txt");
  std::set<std::string> seen;
  for (const auto* pool : {&p.positive, &p.negative, &p.neutral, &p.shared}) {
    for (const auto& w : *pool) EXPECT_TRUE(seen.insert(w).second) << w;
  }
  for (const auto& w : p.positive) EXPECT_TRUE(dict.positive().contains(w)) << w;
  for (const auto& w : p.negative) EXPECT_TRUE(dict.negative().contains(w)) << w;
  for (const auto* pool : {&p.neutral, &p.shared}) {
    for (const auto& w : *pool) EXPECT_FALSE(dict.positive().contains(w) || dict.negative().contains(w)) << w;
  }
}

TEST(Fixture, PreprocessingAndLabelingRecoverTheGeneratingClass) {
  const auto c = generate();
  const auto stop = preprocess::load_stopwords(source_dir() / "data/stopwords_id.txt");
  const std::vector<std::string> kw{"ppkm", "jakarta"};
  const auto unique = corpus::dedupe(c.raw);
  const auto relevant = corpus::filter_relevant(unique.kept, kw);
  ASSERT_EQ(relevant.kept.size(), c.documents.size());
  const auto docs = preprocess::make_documents(relevant.kept, stop);
  const auto dict = lexicon::load_lexicon(source_dir() / "data/lexicon/positive.txt",
                                          source_dir() / "data/lexicon/negative.txt");
  const auto labeled = lexicon::label_corpus(docs, dict);
  std::array<int, 3> recount{};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(docs[i].id, c.documents[i].id);
    EXPECT_EQ(docs[i].tokens, c.documents[i].tokens) << docs[i].raw_text;
    EXPECT_EQ(labeled.documents[i].label, c.documents[i].label) << docs[i].clean_text;
    ++recount[class_index(*labeled.documents[i].label)];
  }
  EXPECT_EQ(recount, (std::array<int, 3>{200, 200, 200}));
}

TEST(Fixture, BundledFileMatchesGenerator) {
  senti::testing::TempDir dir;
  corpus::write_jsonl(dir.path() / "t.jsonl", generate().raw);
  EXPECT_EQ(read_text_file(dir.path() / "t.jsonl"), read_text_file(source_dir() / "data/fixture/tweets.jsonl"));
}

}  // namespace
}  // namespace senti::fixture
