#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "senti/pipeline/commands.hpp"
#include "senti/pipeline/config.hpp"
#include "senti/pipeline/manifest.hpp"
#include "senti/pipeline/review.hpp"
#include "test_util.hpp"

namespace senti::pipeline {
namespace {

namespace fs = std::filesystem;
using senti::testing::source_dir;
using senti::testing::TempDir;

std::string base_config(const fs::path& out, const std::string& extra = "") {
  const auto data = source_dir() / "data";
  return "corpus = " + (data / "fixture/tweets.jsonl").string() + "\n" +
         "positive_lexicon = " + (data / "lexicon/positive.txt").string() + "\n" +
         "negative_lexicon = " + (data / "lexicon/negative.txt").string() + "\n" +
         "stopwords = " + (data / "stopwords_id.txt").string() + "\n" + "output_dir = " + out.string() + "\n" +
         "keywords = ppkm, jakarta\n"
         "split = 4877/5315, 293/5315, 145/5315\n"
         "split_stratified = true\n"
         "seed = 7\n" +
         extra;
}

struct Cli {
  int code = 0;
  std::string out, err;
};

Cli cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Cli r;
  r.code = run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[relative_name(e.path(), root)] = read_text_file(e.path());
  }
  return files;
}

// ---------------------------------------------------------------------------
// configuration

TEST(Config, LoadsAndResolvesRelativePaths) {
  auto cfg = load_config(source_dir() / "data/pipeline.conf");
  EXPECT_EQ(cfg.corpus, source_dir() / "data/fixture/tweets.jsonl");
  EXPECT_EQ(cfg.keywords, (std::vector<std::string>{"ppkm", "jakarta"}));
  EXPECT_EQ(cfg.models.size(), 4u);
  EXPECT_EQ(cfg.split.train, (corpus::Fraction{4877, 5315}));
  EXPECT_TRUE(cfg.split.stratified);
  EXPECT_EQ(cfg.seed, 7u);
  auto desk = encoder::TrainProfile::desk();
  desk.seed = 7;  // the global seed feeds the profile
  EXPECT_EQ(cfg.profile, desk);
}

TEST(Config, OverridesAndOutputDirectory) {
  TempDir dir;
  auto p = dir.write("c.conf", base_config(dir.path() / "out"));
  auto cfg = load_config(p, {{"profile", "paper"}, {"train.epochs", "3"}}, (dir.path() / "elsewhere").string());
  EXPECT_EQ(cfg.profile.batch_size, 32u);
  EXPECT_EQ(cfg.profile.learning_rate, 3e-6);
  EXPECT_EQ(cfg.profile.epochs, 3u);
  EXPECT_EQ(cfg.output_dir, dir.path() / "elsewhere");
  // output_dir does not enter the hash
  EXPECT_EQ(load_config(p).canonical_text, load_config(p, {}, "/tmp/x").canonical_text);
}

TEST(Config, ValidationErrors) {
  TempDir dir;
  auto expect_error = [&](const std::string& text, const std::string& fragment,
                          const std::map<std::string, std::string>& overrides = {}) {
    auto p = dir.write("bad.conf", text);
    try {
      load_config(p, overrides);
      ADD_FAILURE() << "expected failure for: " << fragment;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  const auto out = dir.path() / "out";
  expect_error(base_config(out, "colour = blue\n"), "colour");
  expect_error(base_config(out, "models = mnb, gpt\n"), "gpt");
  expect_error(base_config(out), "batch_size", {{"train.batch_size", "many"}});
  expect_error(base_config(out), "learning_rate", {{"train.learning_rate", "-1"}});
  expect_error(base_config(out), "sum", {{"split", "0.5, 0.5, 0.5"}});
  expect_error(base_config(out, "seed = 8\n"), "duplicate");
  expect_error(base_config(out, "encoder = huge\n"), "huge");
  expect_error("corpus = /nonexistent/tweets.jsonl\n", "nonexistent");
  EXPECT_THROW(load_config(dir.path() / "missing.conf"), ValidationError);
}

// ---------------------------------------------------------------------------
// stage order and exit codes

TEST(Cli, StageOrderIsEnforced) {
  TempDir dir;
  auto p = dir.write("c.conf", base_config(dir.path() / "out"));
  auto r = cli({"label", "-c", p.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("run `senti ingest` first"), std::string::npos) << r.err;
  r = cli({"eval", "-c", p.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(dir.path() / "out/eval"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"ingest"}).code, 1);
  EXPECT_EQ(cli({"ingest", "-c", "/nonexistent.conf"}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
}

TEST(Cli, IngestReportsCounts) {
  TempDir dir;
  auto p = dir.write("c.conf", base_config(dir.path() / "out"));
  auto r = cli({"ingest", "-c", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = read_text_file(dir.path() / "out/ingest/report.json");
  EXPECT_NE(report.find("\"rows_read\": 660"), std::string::npos) << report;
  EXPECT_NE(report.find("\"kept\": 600"), std::string::npos) << report;
  const auto first = tree(dir.path() / "out");
  ASSERT_EQ(cli({"ingest", "-c", p.string()}).code, 0);
  EXPECT_EQ(tree(dir.path() / "out"), first);
}

TEST(Cli, MalformedRowsFailIngestUnlessSkipped) {
  TempDir dir;
  auto corpus = dir.write("t.jsonl", "{\"id\":\"1\",\"text\":\"ppkm\"}\n{broken\n");
  auto cfg = base_config(dir.path() / "out");
  cfg.replace(cfg.find("corpus = "), cfg.find('\n') + 1, "corpus = " + corpus.string() + "\n");
  auto p = dir.write("c.conf", cfg);
  auto r = cli({"ingest", "-c", p.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":2"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"ingest", "-c", p.string(), "--set", "skip_bad_rows=true"}).code, 0);
}

// ---------------------------------------------------------------------------
// review

std::vector<ReviewItem> items() {
  return {{"a", "ppkm bagus", "positive"}, {"b", "ppkm jalan", "neutral"}, {"c", "ppkm buruk", "negative"}};
}

TEST(Review, InterruptThenResume) {
  TempDir dir;
  const auto prog = dir.path() / "p.json", outp = dir.path() / "o.csv";
  std::istringstream first("n\nq\n");
  std::ostringstream log;
  auto r = run_review(ReviewMode::Labels, items(), "sha", prog, outp, first, log);
  EXPECT_EQ(r.reviewed, 1u);
  EXPECT_FALSE(r.finished());
  EXPECT_EQ(read_text_file(outp), "id,label\na,negative\n");
  std::istringstream second("maybe\n\np\n");
  std::ostringstream log2;
  r = run_review(ReviewMode::Labels, items(), "sha", prog, outp, second, log2);
  EXPECT_TRUE(r.finished());
  EXPECT_NE(log2.str().find("resuming at record 2 of 3"), std::string::npos);
  EXPECT_NE(log2.str().find("unrecognized"), std::string::npos);
  EXPECT_EQ(read_text_file(outp), "id,label\na,negative\nc,positive\n");
}

TEST(Review, SingleOverrideRow) {
  TempDir dir;
  std::istringstream in("\nn\n\n");
  std::ostringstream log;
  run_review(ReviewMode::Labels, items(), "sha", dir.path() / "p.json", dir.path() / "o.csv", in, log);
  EXPECT_EQ(read_text_file(dir.path() / "o.csv"), "id,label\nb,negative\n");
}

TEST(Review, CorruptOrForeignProgressIsRejected) {
  TempDir dir;
  const auto prog = dir.path() / "p.json", outp = dir.path() / "o.csv";
  std::istringstream in("k\nq\n");
  std::ostringstream log;
  std::vector<ReviewItem> rel{{"a", "x", "keep"}, {"b", "y", "keep"}};
  run_review(ReviewMode::Relevance, rel, "sha", prog, outp, in, log);
  auto text = read_text_file(prog);
  auto tampered = text;
  tampered.replace(tampered.find("\"keep\""), 6, "\"drop\"");
  write_text_file(prog, tampered);
  std::istringstream again("\n");
  EXPECT_THROW(run_review(ReviewMode::Relevance, rel, "sha", prog, outp, again, log), ValidationError);
  write_text_file(prog, text);
  EXPECT_THROW(run_review(ReviewMode::Relevance, rel, "other", prog, outp, again, log), ValidationError);
  EXPECT_THROW(run_review(ReviewMode::Labels, items(), "sha", prog, outp, again, log), ValidationError);
  EXPECT_EQ(progress_from_json(text, "p"), (ReviewProgress{ReviewMode::Relevance, "sha", {{"a", "keep"}}}));
}

TEST(Review, ImportMatchesInteractiveEntry) {
  TempDir dir;
  std::istringstream in("p\n\nu\n");
  std::ostringstream log;
  run_review(ReviewMode::Labels, items(), "sha", dir.path() / "p1.json", dir.path() / "o1.csv", in, log);
  auto sheet = dir.write("sheet.csv",
                         "id,clean_text,score,proposed_label,final_label\n"
                         "a,ppkm bagus,1,positive,positive\n"
                         "b,ppkm jalan,0,neutral,neutral\n"
                         "c,ppkm buruk,-1,negative,neutral\n");
  import_review(ReviewMode::Labels, items(), "sha", sheet, dir.path() / "p2.json", dir.path() / "o2.csv");
  EXPECT_EQ(read_text_file(dir.path() / "o1.csv"), read_text_file(dir.path() / "o2.csv"));
  EXPECT_EQ(read_text_file(dir.path() / "p1.json"), read_text_file(dir.path() / "p2.json"));
  auto bad = dir.write("bad.csv", "id,clean_text,score,proposed_label,final_label\nzz,x,0,neutral,neutral\n");
  EXPECT_THROW(import_review(ReviewMode::Labels, items(), "sha", bad, dir.path() / "p3.json", dir.path() / "o3.csv"),
               ValidationError);
}

TEST(Review, RelevanceDropsFlowIntoIngest) {
  TempDir dir;
  auto p = dir.write("c.conf", base_config(dir.path() / "out"));
  ASSERT_EQ(cli({"ingest", "-c", p.string()}).code, 0);
  // Drop the first candidate, accept the rest.
  std::string answers = "d\n";
  for (int i = 0; i < 700; ++i) answers += "\n";
  auto r = cli({"review", "--mode", "relevance", "-c", p.string()}, answers);
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(cli({"ingest", "-c", p.string()}).code, 0);
  const auto report = read_text_file(dir.path() / "out/ingest/report.json");
  EXPECT_NE(report.find("\"kept\": 599"), std::string::npos) << report;
}

// ---------------------------------------------------------------------------
// whole pipeline

TEST(Cli, PaperProfileIsRecordedInHistory) {
  TempDir dir;
  auto p = dir.write("c.conf", base_config(dir.path() / "out", "models = bert\nprofile = paper\n"));
  ASSERT_EQ(cli({"ingest", "-c", p.string()}).code, 0);
  ASSERT_EQ(cli({"label", "-c", p.string()}).code, 0);
  auto r = cli({"train", "-c", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto hist = read_text_file(dir.path() / "out/train/bert/history.csv");
  std::istringstream lines(hist);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "epoch,train_loss,train_acc,val_loss,val_acc,batch_size,epochs,learning_rate");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_TRUE(line.ends_with(",32,10,3e-06")) << line;
  }
  EXPECT_EQ(rows, 10);
}

TEST(Cli, FullRunIsByteIdenticalAcrossOutputDirectories) {
  TempDir dir;
  auto p = dir.write("c.conf", base_config(dir.path() / "unused", "models = lexicon, mnb, svm, bert\n"));
  const std::vector<std::string> fast{"--set", "train.epochs=3"};
  auto args = [&](const fs::path& out) {
    std::vector<std::string> a{"run", "-c", p.string(), "--set", "output_dir=" + out.string()};
    a.insert(a.end(), fast.begin(), fast.end());
    return a;
  };
  auto r1 = cli(args(dir.path() / "a"));
  ASSERT_EQ(r1.code, 0) << r1.err;
  auto r2 = cli(args(dir.path() / "b"));
  ASSERT_EQ(r2.code, 0) << r2.err;
  const auto a = tree(dir.path() / "a"), b = tree(dir.path() / "b");
  EXPECT_EQ(a, b);
  for (const char* f : {"ingest/manifest.json", "label/manifest.json", "train/manifest.json", "eval/manifest.json",
                        "viz/manifest.json", "train/mnb.json", "train/svm.json", "train/bert/checkpoint.bin",
                        "eval/comparison.csv", "viz/cloud.svg", "viz/ngram_1.svg", "viz/distribution.svg"}) {
    EXPECT_TRUE(a.contains(f)) << f;
  }
  auto c = cli({"compare", "-c", p.string(), "--set", "output_dir=" + (dir.path() / "a").string()});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("mnb"), std::string::npos);
}

TEST(Documents, RoundTrip) {
  TempDir dir;
  std::vector<Document> docs{senti::testing::labeled("1", {"a", "b"}, SentimentLabel::Positive)};
  docs[0].raw_text = "A b!";
  write_documents(dir.path() / "d.jsonl", docs);
  EXPECT_EQ(read_documents(dir.path() / "d.jsonl"), docs);
}

}  // namespace
}  // namespace senti::pipeline
