#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mlink/io.hpp"
#include "mlink/pipeline.hpp"
#include "mlink/synthgen.hpp"

namespace fs = std::filesystem;
using namespace mlink;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mlink");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mlink_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string make_data() {
    const auto p = path("data.csv");
    EXPECT_EQ(run({"generate", "--n", "60", "--layers", "2", "--snapshots", "8", "--edges", "30", "--seed", "5",
                   "--out", p})
                  .code,
              0);
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"predict", "--help"}).code, 0);
  EXPECT_EQ(run({"predict"}).code, cli::kParameterError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kParameterError);
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run({"ingest", "--input", path("missing.csv"), "--out", path("x.csv")}).code, cli::kInputError);
  std::ofstream(path("bad.csv")) << "t,layer,src,dst\n0,0,a\n";
  auto r = run({"ingest", "--input", path("bad.csv"), "--out", path("x.csv")});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find("2"), std::string::npos);
}

TEST_F(Cli, ParameterErrors) {
  const auto data = make_data();
  EXPECT_EQ(run({"predict", "--data", data, "--target", "0", "--t", "2", "--out", path("p.csv")}).code,
            cli::kParameterError);
  EXPECT_EQ(run({"predict", "--data", data, "--target", "0", "--t", "5", "--theta", "2", "--out", path("p.csv")}).code,
            cli::kParameterError);
  EXPECT_EQ(run({"predict", "--data", data, "--target", "0", "--t", "5", "--variant", "nope", "--out", path("p.csv")})
                .code,
            cli::kParameterError);
  EXPECT_EQ(run({"generate", "--rho", "3", "--out", path("g.csv")}).code, cli::kParameterError);
}

TEST_F(Cli, IngestWritesCanonicalData) {
  std::ofstream(path("raw.csv")) << "src,dst,t,layer,weight\nb,a,1,0,2\nb,a,1,0,1\nc,c,0,0,1\n";
  auto r = run({"ingest", "--input", path("raw.csv"), "--out", path("canon.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("canon.csv")), "t,layer,src,dst,weight\n1,0,b,a,3\n");
  EXPECT_FALSE(r.out.empty());
}

TEST_F(Cli, PredictMatchesLibraryCall) {
  const auto data = make_data();
  auto r = run({"predict", "--data", data, "--target", "1", "--t", "6", "--variant", "hybrid", "--out",
                path("p.csv"), "--tally", path("tally.csv"), "--likelihoods", path("lik.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto series = ingest_file(data).series;
  auto pred = predict(series, 1, 6, PredictorSpec{});
  std::ostringstream expect;
  write_scores(expect, pred.ranked, series.labels());
  const auto text = slurp(path("p.csv"));
  EXPECT_NE(text.find(expect.str()), std::string::npos);
  EXPECT_EQ(text.rfind("# ", 0), 0u);
  EXPECT_EQ(slurp(path("tally.csv")).rfind("src,dst,borda_score,final_rank\n", 0), 0u);
  EXPECT_EQ(slurp(path("lik.csv")).rfind("target_layer,other_layer,", 0), 0u);
}

TEST_F(Cli, ExplicitPairs) {
  const auto data = make_data();
  std::ofstream(path("pairs.csv")) << "src,dst\n0,1\n2,3\n";
  auto r = run({"predict", "--data", data, "--target", "0", "--t", "5", "--pairs", path("pairs.csv"), "--out",
                path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t rows = 0;
  std::istringstream in(slurp(path("p.csv")));
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 3u);  // header plus two pairs
}

TEST_F(Cli, OutputsIndependentOfThreads) {
  const auto data = make_data();
  for (const char* variant : {"hybrid", "likelihood-only", "single:ipd"}) {
    ASSERT_EQ(run({"--threads", "1", "predict", "--data", data, "--target", "0", "--t", "7", "--variant", variant,
                   "--out", path("a.csv")})
                  .code,
              0);
    ASSERT_EQ(run({"--threads", "4", "predict", "--data", data, "--target", "0", "--t", "7", "--variant", variant,
                   "--out", path("b.csv")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv"))) << variant;
  }
  ASSERT_EQ(run({"--threads", "1", "evaluate", "--data", data, "--target", "0", "--variants", "hybrid,rank-only",
                 "--out", path("e1")})
                .code,
            0);
  ASSERT_EQ(run({"--threads", "4", "evaluate", "--data", data, "--target", "0", "--variants", "hybrid,rank-only",
                 "--out", path("e4")})
                .code,
            0);
  for (const char* f : {"hybrid.json", "rank-only.json", "summary.tsv", "overlap.csv"})
    EXPECT_EQ(slurp(path("e1") + "/" + f), slurp(path("e4") + "/" + f)) << f;
}

TEST_F(Cli, GenerateMatchesLibrary) {
  ASSERT_EQ(run({"generate", "--n", "50", "--snapshots", "4", "--edges", "20", "--rho", "0.5", "--memory", "2",
                 "--seed", "9", "--out", path("g.csv")})
                .code,
            0);
  GenParams g;
  g.nodes = 50;
  g.snapshots = 4;
  g.edges_per_snapshot = 20;
  g.rho = 0.5;
  g.memory = 2;
  g.seed = 9;
  EXPECT_EQ(slurp(path("g.csv")), canonical_csv(generate(g)));
}

TEST_F(Cli, EvaluateTableWritesEveryRow) {
  const auto data = make_data();
  auto r = run({"evaluate", "--data", data, "--target", "0", "--variants", "table", "--out", path("t"), "--roc"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : comparison_rows()) {
    std::string name = row.name();
    for (char& c : name)
      if (c == ':' || c == '/') c = '-';
    EXPECT_TRUE(fs::exists(path("t") + "/" + name + ".json")) << name;
  }
  EXPECT_TRUE(fs::exists(path("t") + "/interactions.csv"));
  EXPECT_NE(r.out.find("hybrid"), std::string::npos);
}
