#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "patchsearch/cli.hpp"
#include "patchsearch/io/atomic_write.hpp"
#include "patchsearch/io/results.hpp"
#include "temp_dir.hpp"

namespace pt = patchsearch::testing;
using patchsearch::io::read_text_file;
using patchsearch::io::write_file_atomic;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "patchsearch");
  std::ostringstream out, err;
  const int code = patchsearch::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    write_file_atomic(dir / "spec.json",
                      std::string_view(R"({"n_classes": 3, "n_patches": 12, "dim": 16, "scenes": 5, "seed": 4,
                                           "min_object": 2, "max_object": 4})"));
    ASSERT_EQ(cli({"synth", "--spec", s("spec.json"), "--out", s("data")}).code, 0);
    ASSERT_EQ(cli({"enroll", "--manifest", s("data/manifest.json"), "--out", s("store.json")}).code, 0);
  }

  std::string s(const std::string& name) const { return (dir / name).string(); }

  pt::TempDir dir;
};

}  // namespace

TEST_F(CliTest, EndToEndOnCleanData) {
  ASSERT_EQ(cli({"search", "--store", s("store.json"), "--manifest", s("data/manifest.json"), "--out", s("res.jsonl")})
                .code,
            0);
  const Outcome r = cli({"eval", "--manifest", s("data/manifest.json"), "--results", s("res.jsonl"), "--out", s("rep.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mIoU    1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ACC     1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("cPREC   1\n"), std::string::npos) << r.out;
  const std::string report = read_text_file(dir / "rep.jsonl");
  EXPECT_EQ(report.rfind(R"({"schema":"patchsearch.report")", 0), 0u);
}

TEST_F(CliTest, SearchSingleFeatureFile) {
  const Outcome r = cli({"search", "--store", s("store.json"), "--features", s("data/features/scene_000.pfmap"), "--refine",
                     "--class-threshold", "0.5", "--out", s("one.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = patchsearch::io::load_results(dir / "one.jsonl");
  ASSERT_EQ(doc.queries.size(), 1u);
  EXPECT_EQ(doc.queries[0].results.size(), 3u);
}

TEST_F(CliTest, OutputIsIndependentOfWorkerCount) {
  const std::vector<std::string> base{"search", "--store", s("store.json"), "--manifest", s("data/manifest.json"), "--refine"};
  auto with = [&](std::string workers, std::string out) {
    auto args = base;
    args.insert(args.end(), {"--workers", workers, "--out", s(out)});
    return cli(args).code;
  };
  ASSERT_EQ(with("1", "a.jsonl"), 0);
  ASSERT_EQ(with("1", "b.jsonl"), 0);
  ASSERT_EQ(with("3", "c.jsonl"), 0);
  EXPECT_EQ(read_text_file(dir / "a.jsonl"), read_text_file(dir / "b.jsonl"));
  EXPECT_EQ(read_text_file(dir / "a.jsonl"), read_text_file(dir / "c.jsonl"));
}

TEST_F(CliTest, BenchPrintsStages) {
  const Outcome r = cli({"bench", "--manifest", s("data/manifest.json"), "--store", s("store.json"), "--iters", "1",
                     "--warmup", "0", "--out", s("bench.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* stage : {"prepass", "match", "score", "refine", "total"}) {
    EXPECT_NE(r.out.find(stage), std::string::npos) << stage;
  }
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(cli({"search", "--store", s("store.json"), "--out", s("x.jsonl")}).code, 1);
  EXPECT_EQ(cli({"enroll", "--manifest", s("data/manifest.json"), "--out", s("s.json"), "--k-s", "1"}).code, 1);
  EXPECT_EQ(cli({"eval", "--manifest", s("data/manifest.json")}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"eval", "--manifest", s("m"), "--results", s("r"), "--mode", "polygon"}).code, 1);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(cli({"enroll", "--manifest", s("nope.json"), "--out", s("s.json")}).code, 2);

  write_file_atomic(dir / "garbage.pfmap", std::string_view("not a feature file"));
  const Outcome bad = cli({"search", "--store", s("store.json"), "--features", s("garbage.pfmap"), "--out", s("x.jsonl")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("garbage.pfmap"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.jsonl"));
}

TEST_F(CliTest, ManifestVersionMismatchExitsTwo) {
  ASSERT_EQ(cli({"search", "--store", s("store.json"), "--manifest", s("data/manifest.json"), "--out", s("res.jsonl")})
                .code,
            0);
  std::string text = read_text_file(dir / "res.jsonl");
  const std::string key = "\"manifest_version\":1";
  const auto pos = text.find(key);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, key.size(), "\"manifest_version\":2");
  write_file_atomic(dir / "res2.jsonl", std::string_view(text));
  EXPECT_EQ(cli({"eval", "--manifest", s("data/manifest.json"), "--results", s("res2.jsonl")}).code, 2);
}
