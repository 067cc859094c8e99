#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "senti/corpus.hpp"
#include "test_util.hpp"

namespace senti::corpus {
namespace {

using senti::testing::TempDir;

TweetRecord rec(std::string id, std::string text) {
  TweetRecord r;
  r.id = std::move(id);
  r.text = std::move(text);
  return r;
}

std::vector<std::string> ids_of(std::span<const TweetRecord> rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.id);
  return out;
}

std::vector<std::string> ids_of(std::span<const Document> ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.id);
  return out;
}

// ---------------------------------------------------------------------------
// ingest

TEST(Ingest, JsonlKeepsFileOrder) {
  TempDir dir;
  auto p = dir.write("a.jsonl",
                     "{\"id\":\"3\",\"text\":\"PPKM lagi\"}\n"
                     "{\"id\":1,\"text\":\"jakarta macet\",\"created_at\":\"2021-07-03T01:00:00Z\"}\n"
                     "\n"
                     "{\"id\":\"2\",\"text\":\"biasa saja\"}\n");
  const std::vector<std::string> keywords{"ppkm", "jakarta"};
  auto r = ingest_file(p, RecordFormat::Jsonl, keywords);
  EXPECT_TRUE(r.errors.empty());
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(ids_of(r.records), (std::vector<std::string>{"3", "1", "2"}));
  EXPECT_EQ(r.records[0].matched_keywords, (std::vector<std::string>{"ppkm"}));
  EXPECT_EQ(r.records[1].matched_keywords, (std::vector<std::string>{"jakarta"}));
  EXPECT_TRUE(r.records[2].matched_keywords.empty());
  ASSERT_TRUE(r.records[1].created_at);
  EXPECT_EQ(format_rfc3339(*r.records[1].created_at), "2021-07-03T01:00:00Z");
}

TEST(Ingest, CsvRowMissingTextReportsLine) {
  TempDir dir;
  auto p = dir.write("a.csv", "id,text\n1,halo ppkm\n2\n3,\"multi\nline\"\n");
  auto r = ingest_file(p, RecordFormat::Csv);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 3u);
  EXPECT_EQ(ids_of(r.records), (std::vector<std::string>{"1", "3"}));
  EXPECT_EQ(r.records[1].text, "multi\nline");
}

TEST(Ingest, CsvWithoutTextColumnIsRejected) {
  TempDir dir;
  auto p = dir.write("a.csv", "id,body\n1,x\n");
  EXPECT_THROW(ingest_file(p, RecordFormat::Csv), ValidationError);
}

TEST(Ingest, MalformedRowsAreReportedNotDropped) {
  TempDir dir;
  auto p = dir.write("a.jsonl",
                     "{\"id\":\"1\",\"text\":\"ok\"}\n"
                     "{not json}\n"
                     "{\"id\":\"\",\"text\":\"empty id\"}\n"
                     "{\"id\":\"4\",\"text\":\"bad time\",\"created_at\":\"yesterday\"}\n"
                     "{\"id\":\"5\"}\n");
  auto r = ingest_file(p, RecordFormat::Jsonl);
  EXPECT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.errors.size(), 4u);
  EXPECT_EQ(r.errors[0].line, 2u);
  EXPECT_EQ(r.errors[1].line, 3u);
  EXPECT_EQ(r.errors[2].line, 4u);
  EXPECT_EQ(r.errors[3].line, 5u);
  EXPECT_EQ(r.rows_read, 5u);
}

TEST(Ingest, DuplicateIdNamesBothLines) {
  TempDir dir;
  auto p = dir.write("a.jsonl", "{\"id\":\"7\",\"text\":\"a\"}\n{\"id\":\"8\",\"text\":\"b\"}\n{\"id\":\"7\",\"text\":\"c\"}\n");
  auto r = ingest_file(p, RecordFormat::Jsonl);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 3u);
  EXPECT_NE(r.errors[0].message.find("lines 1 and 3"), std::string::npos) << r.errors[0].message;
}

TEST(Ingest, MissingFileThrows) {
  EXPECT_THROW(ingest_file("/nonexistent/file.jsonl", RecordFormat::Jsonl), ValidationError);
}

TEST(Ingest, FiftyThousandRowsStream) {
  TempDir dir;
  const auto p = dir.path() / "big.jsonl";
  {
    std::ofstream out(p);
    for (int i = 0; i < 50000; ++i) out << "{\"id\":\"r" << i << "\",\"text\":\"ppkm hari ke " << i << "\"}\n";
  }
  std::size_t seen = 0;
  std::size_t errors = 0;
  for_each_record(
      p, RecordFormat::Jsonl, [&](TweetRecord&& r, std::size_t line) {
        EXPECT_EQ(r.id, "r" + std::to_string(line - 1));
        ++seen;
      },
      [&](LineError&&) { ++errors; });
  EXPECT_EQ(seen, 50000u);
  EXPECT_EQ(errors, 0u);
  EXPECT_EQ(ingest_file(p, RecordFormat::Jsonl).records.size(), 50000u);
}

TEST(Ingest, WriteThenReadRoundTrips) {
  TempDir dir;
  std::vector<TweetRecord> rs{rec("a", "ppkm \"quoted\"\nline"), rec("b", "jakarta")};
  rs[0].created_at = parse_rfc3339("2021-07-03T00:00:01.5Z");
  rs[1].matched_keywords = {"jakarta"};
  write_jsonl(dir.path() / "o.jsonl", rs);
  auto back = ingest_file(dir.path() / "o.jsonl", RecordFormat::Jsonl, std::vector<std::string>{"jakarta"});
  EXPECT_EQ(back.records, rs);
}

TEST(Keywords, CaseInsensitiveSubset) {
  const std::vector<std::string> kw{"ppkm", "jakarta", "covid"};
  EXPECT_EQ(matched_keywords("PPKM di JaKaRtA", kw), (std::vector<std::string>{"ppkm", "jakarta"}));
  EXPECT_TRUE(matched_keywords("tidak ada", kw).empty());
}

// ---------------------------------------------------------------------------
// dedupe

TEST(Dedupe, CaseOnlyDifferenceRemovedUnderNormalizedText) {
  std::vector<TweetRecord> rs{rec("1", "PPKM Diperpanjang"), rec("2", "ppkm  diperpanjang ")};
  auto r = dedupe(rs, DedupeKey::NormalizedText);
  EXPECT_EQ(ids_of(r.kept), (std::vector<std::string>{"1"}));
  EXPECT_EQ(ids_of(r.removed), (std::vector<std::string>{"2"}));
}

TEST(Dedupe, AllUniqueRemovesNothing) {
  std::vector<TweetRecord> rs{rec("1", "a"), rec("2", "b"), rec("3", "c")};
  EXPECT_TRUE(dedupe(rs).removed.empty());
}

TEST(Dedupe, KeyModesOnSharedText) {
  std::vector<TweetRecord> rs{rec("1", "same text"), rec("2", "same text")};
  EXPECT_EQ(dedupe(rs, DedupeKey::Id).kept.size(), 2u);
  EXPECT_EQ(dedupe(rs, DedupeKey::NormalizedText).kept.size(), 1u);
  std::vector<TweetRecord> same_id{rec("1", "x"), rec("1", "y")};
  EXPECT_EQ(ids_of(dedupe(same_id, DedupeKey::Id).removed), (std::vector<std::string>{"1"}));
}

TEST(Dedupe, IdempotentOnRandomInput) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> words{"ppkm", "PPKM", "covid", "Covid", "  ", "jakarta"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TweetRecord> rs;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::string text;
      for (int w = 0, k = static_cast<int>(rng() % 3) + 1; w < k; ++w) text += words[rng() % words.size()] + " ";
      rs.push_back(rec(std::to_string(rng() % 6), text));
    }
    for (auto key : {DedupeKey::Id, DedupeKey::NormalizedText}) {
      auto once = dedupe(rs, key);
      auto twice = dedupe(once.kept, key);
      EXPECT_EQ(twice.kept, once.kept);
      EXPECT_TRUE(twice.removed.empty());
      EXPECT_EQ(once.kept.size() + once.removed.size(), rs.size());
    }
  }
}

// ---------------------------------------------------------------------------
// relevance

TEST(Relevance, KeywordAndVerdictDecisions) {
  const std::vector<std::string> kw{"PPKM"};
  std::vector<TweetRecord> rs{rec("1", "ppkm diperpanjang"), rec("2", "cuaca cerah"), rec("3", "ppkm tapi bukan")};
  VerdictMap v{{"3", Verdict::Drop}, {"2", Verdict::Keep}, {"99", Verdict::Drop}};
  auto plain = filter_relevant(rs, kw);
  EXPECT_EQ(ids_of(plain.kept), (std::vector<std::string>{"1", "3"}));
  EXPECT_EQ(plain.dropped_by_keyword, 1u);
  auto judged = filter_relevant(rs, kw, &v);
  EXPECT_EQ(ids_of(judged.kept), (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(judged.dropped_by_verdict, 1u);
  EXPECT_EQ(judged.kept_by_verdict, 1u);
  EXPECT_EQ(judged.unknown_verdict_ids, (std::vector<std::string>{"99"}));
}

TEST(Relevance, AllMatchMode) {
  const std::vector<std::string> kw{"ppkm", "jakarta"};
  std::vector<TweetRecord> rs{rec("1", "ppkm jakarta"), rec("2", "ppkm saja")};
  EXPECT_EQ(filter_relevant(rs, kw, nullptr, KeywordMatch::All).kept.size(), 1u);
  EXPECT_EQ(filter_relevant(rs, kw, nullptr, KeywordMatch::Any).kept.size(), 2u);
}

TEST(Relevance, EmptyKeywordsRejected) {
  std::vector<TweetRecord> rs{rec("1", "x")};
  EXPECT_THROW(filter_relevant(rs, std::vector<std::string>{}), ValidationError);
}

TEST(Relevance, WithoutVerdictsIsAContainmentPredicate) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words{"ppkm", "Jakarta", "hujan", "macet", "PPKMdarurat"};
  const std::vector<std::string> kw{"ppkm", "jakarta"};
  std::vector<TweetRecord> rs;
  for (int i = 0; i < 300; ++i) {
    std::string text = words[rng() % words.size()] + " " + words[rng() % words.size()];
    rs.push_back(rec(std::to_string(i), text));
  }
  std::vector<TweetRecord> expected;
  for (const auto& r : rs) {
    const auto low = ascii_lower(r.text);
    if (low.find("ppkm") != std::string::npos || low.find("jakarta") != std::string::npos) expected.push_back(r);
  }
  EXPECT_EQ(ids_of(filter_relevant(rs, kw).kept), ids_of(expected));
}

TEST(Verdicts, SaveLoadRoundTrip) {
  TempDir dir;
  VerdictMap v{{"b", Verdict::Drop}, {"a", Verdict::Keep}};
  save_verdicts(dir.path() / "v.csv", v);
  EXPECT_EQ(load_verdicts(dir.path() / "v.csv"), v);
  auto bad = dir.write("bad.csv", "id,verdict\nx,maybe\n");
  EXPECT_THROW(load_verdicts(bad), ValidationError);
}

// ---------------------------------------------------------------------------
// split

std::vector<Document> docs(std::size_t n, std::size_t positives = 0) {
  std::vector<Document> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(senti::testing::labeled("d" + std::to_string(i), {"w"},
                                          i < n - positives ? SentimentLabel::Negative : SentimentLabel::Positive));
  }
  return out;
}

TEST(Split, ReferenceProportionsGiveReferenceCounts) {
  const auto s = split_sizes(5315, SplitSpec::reference_proportions());
  EXPECT_EQ(s.train, 4877u);
  EXPECT_EQ(s.validation, 293u);
  EXPECT_EQ(s.test, 145u);
}

TEST(Split, FloorThenRemainderToTrain) {
  SplitSpec spec;  // 0.8 / 0.1 / 0.1
  const auto s = split_sizes(19, spec);
  EXPECT_EQ(s.validation, 1u);
  EXPECT_EQ(s.test, 1u);
  EXPECT_EQ(s.train, 17u);
}

TEST(Split, DeterministicForFixedSeed) {
  SplitSpec spec;
  spec.train = Fraction::parse("0.8");
  spec.seed = 42;
  const auto d = docs(10);
  const auto a = split(d, spec);
  const auto b = split(d, spec);
  EXPECT_EQ(ids_of(a.train), ids_of(b.train));
  EXPECT_EQ(ids_of(a.validation), ids_of(b.validation));
  EXPECT_EQ(ids_of(a.test), ids_of(b.test));
  EXPECT_EQ(a.train.size(), 8u);
}

// Independent shuffle-then-bucket reference.
std::array<std::vector<std::size_t>, 3> reference_buckets(std::vector<std::size_t> idx, std::size_t nval,
                                                         std::size_t ntest, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    std::swap(idx[i - 1], idx[x % bound]);
  }
  std::array<std::vector<std::size_t>, 3> out;
  const std::size_t ntrain = idx.size() - nval - ntest;
  for (std::size_t k = 0; k < idx.size(); ++k) out[k < ntrain ? 0 : k < ntrain + nval ? 1 : 2].push_back(idx[k]);
  return out;
}

TEST(Split, StratifiedMatchesReferenceOracle) {
  const auto d = docs(100, 10);  // 90 negative, 10 positive
  SplitSpec spec;
  spec.seed = 3;
  spec.stratified = true;
  const auto s = split(d, spec);
  auto count = [](const std::vector<Document>& ds, SentimentLabel l) {
    return std::count_if(ds.begin(), ds.end(), [&](const Document& x) { return x.label == l; });
  };
  EXPECT_EQ(count(s.train, SentimentLabel::Negative), 72);
  EXPECT_EQ(count(s.train, SentimentLabel::Positive), 8);

  std::mt19937_64 rng(3);
  std::vector<std::size_t> neg(90), pos(10);
  std::iota(neg.begin(), neg.end(), 0);
  std::iota(pos.begin(), pos.end(), 90);
  auto bn = reference_buckets(neg, 9, 9, rng);
  auto bp = reference_buckets(pos, 1, 1, rng);
  for (int b = 0; b < 3; ++b) {
    std::vector<std::size_t> want = bn[b];
    want.insert(want.end(), bp[b].begin(), bp[b].end());
    std::sort(want.begin(), want.end());
    std::vector<std::string> want_ids;
    for (auto i : want) want_ids.push_back("d" + std::to_string(i));
    const auto& got = b == 0 ? s.train : b == 1 ? s.validation : s.test;
    EXPECT_EQ(ids_of(got), want_ids) << "bucket " << b;
  }
}

TEST(Split, PartitionIsExhaustiveAndDisjoint) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 60;
    auto d = docs(n, rng() % n);
    SplitSpec spec;
    spec.seed = rng();
    spec.stratified = trial % 2 == 0;
    const auto s = split(d, spec);
    std::vector<std::string> all = ids_of(s.train);
    for (const auto& part : {s.validation, s.test}) {
      auto more = ids_of(part);
      all.insert(all.end(), more.begin(), more.end());
    }
    auto want = ids_of(d);
    std::sort(all.begin(), all.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(all, want);
  }
}

TEST(Split, Errors) {
  SplitSpec spec;
  EXPECT_THROW(split(std::vector<Document>{}, spec), ValidationError);
  EXPECT_THROW(split(docs(2), spec), ValidationError);
  spec.test = Fraction{2, 10};
  EXPECT_THROW(split(docs(10), spec), ValidationError);
  EXPECT_THROW(Fraction::parse("1/0"), ValidationError);
  EXPECT_THROW(Fraction::parse("abc"), ValidationError);
  EXPECT_EQ(Fraction::parse("0.25"), (Fraction{1, 4}));
}

}  // namespace
}  // namespace senti::corpus
