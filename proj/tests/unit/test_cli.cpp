#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "epkit_cli/cli.hpp"
#include "epkit_cli/io.hpp"
#include "test_util.hpp"

using namespace epkit;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "epkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("epkit_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    unsetenv("EPKIT_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_matrix(const std::string& name, const ComplexMatrix& m) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << io::matrix_to_json(m).dump();
    return p.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

json payload(const Result& r) { return json::parse(r.out).at("payload"); }

}  // namespace

TEST_F(CliTest, ClassifyExamples) {
  const Result d = run({"classify", "--input", write_matrix("d.json", ComplexMatrix::diagonal({1.0, 0.0}))});
  ASSERT_EQ(d.code, cli::kExitOk) << d.err;
  EXPECT_TRUE(payload(d).at("is_ep").get<bool>());
  EXPECT_EQ(json::parse(d.out).at("kind"), "classification");

  const Result j = run({"classify", write_matrix("j.json", ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}))});
  ASSERT_EQ(j.code, cli::kExitOk) << j.err;
  EXPECT_FALSE(payload(j).at("is_ep").get<bool>());
  EXPECT_DOUBLE_EQ(payload(j).at("gamma").get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(payload(j).at("spectral_radius").get<double>(), 0.0);
}

TEST_F(CliTest, ClassifyWritesOutputFile) {
  const std::string out = path("report.json");
  const Result r = run({"classify", "-i", write_matrix("m.json", ComplexMatrix::identity(3)), "--output", out});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const io::ReportFile f = io::report_file_from_json(json::parse(in));
  EXPECT_EQ(std::get<ClassificationReport>(f.payload).rank, 3);
}

TEST_F(CliTest, MalformedInputWritesNothing) {
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << "{not json";
  const std::string out = path("never.json");
  const Result r = run({"classify", "--input", bad.string(), "--output", out});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_NE(r.err.find("error"), std::string::npos);

  EXPECT_EQ(run({"classify", "--input", path("missing.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"classify", "--input", write_matrix("rect.json", ComplexMatrix(2, 3))}).code, cli::kExitUsage);
}

TEST_F(CliTest, VerifyExamples) {
  const Result ok = run({"verify", "thm2.1", "--dim", "6", "--rank", "4", "--trials", "200", "--seed", "42"});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  EXPECT_EQ(payload(ok).at("failures"), 0);
  EXPECT_EQ(payload(ok).at("trials"), 200);

  EXPECT_EQ(run({"verify", "thm9.9"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--theorem", "thm2.1", "--dim", "4", "--rank", "9"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--theorem", "thm2.1", "--dim", "4", "--trials", "5"}).code, cli::kExitOk);
}

TEST_F(CliTest, VerifyIsByteIdentical) {
  const Result a = run({"verify", "thm3.4", "--trials", "200", "--seed", "7"});
  const Result b = run({"verify", "thm3.4", "--trials", "200", "--seed", "7"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(payload(a).contains("elapsed_ms"));
  const Result timed = run({"verify", "thm3.4", "--trials", "3", "--timing"});
  EXPECT_TRUE(payload(timed).contains("elapsed_ms"));
  EXPECT_TRUE(json::parse(timed.out).contains("wall_time_ms"));
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  const Result explicit_seed = run({"verify", "thm2.3", "--trials", "6", "--seed", "99"});
  setenv("EPKIT_SEED", "99", 1);
  const Result env_seed = run({"verify", "thm2.3", "--trials", "6"});
  EXPECT_EQ(explicit_seed.out, env_seed.out);
  setenv("EPKIT_SEED", "not-a-number", 1);
  EXPECT_EQ(run({"verify", "thm2.3", "--trials", "6"}).code, cli::kExitUsage);
  unsetenv("EPKIT_SEED");
}

TEST_F(CliTest, SuiteCoversAllIds) {
  const Result r = run({"suite", "--seed", "1", "--trials", "10"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json p = payload(r);
  EXPECT_TRUE(p.at("passed").get<bool>());
  std::vector<std::string> ids;
  for (const json& v : p.at("verdicts")) ids.push_back(v.at("theorem_id"));
  EXPECT_EQ(ids, theorem_ids());

  EXPECT_EQ(run({"suite", "--seed", "1", "--trials", "10", "--tol-eq", "1e-2"}).code, cli::kExitOk);
}

TEST_F(CliTest, InjectedFaultFailsWithCounterexample) {
  const std::string out = path("fault.json");
  const Result r = run({"suite", "--seed", "1", "--trials", "6", "--inject-fault", "--output", out});
  EXPECT_EQ(r.code, cli::kExitPropertyFailed);
  std::ifstream in(out);
  const json p = json::parse(in).at("payload");
  EXPECT_FALSE(p.at("passed").get<bool>());
  bool found = false;
  for (const json& v : p.at("verdicts")) {
    if (!v.at("counterexample").is_null()) {
      found = true;
      EXPECT_FALSE(v.at("counterexample").at("matrices").empty());
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, ModelExamples) {
  const Result h = run({"model", "diag_harmonic_truncated", "--n-max", "10"});
  ASSERT_EQ(h.code, cli::kExitOk) << h.err;
  const json rows = payload(h).at("rows");
  ASSERT_EQ(rows.size(), 10U);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(rows[i].at("gamma").get<double>(), 1.0 / static_cast<double>(i + 1), 1e-14);
  }
  const Result d = run({"model", "--family", "diag_n", "--n-max", "5"});
  ASSERT_EQ(d.code, cli::kExitOk);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(payload(d).at("rows")[i].at("spectral_radius").get<double>(), static_cast<double>(i + 1), 1e-13);
  }
  EXPECT_EQ(run({"model", "bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"model", "diag_n", "--n-max", "1"}).code, cli::kExitUsage);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "thm2.1", "--trials", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "thm2.1", "--tol-eq", "2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "thm2.1", "--tol-rank", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, ToleranceEchoedInReport) {
  const Result r = run({"model", "diag_n", "--n-max", "3", "--tol-eq", "1e-6", "--tol-rank", "1e-12"});
  ASSERT_EQ(r.code, cli::kExitOk);
  const json t = json::parse(r.out).at("tolerance");
  EXPECT_DOUBLE_EQ(t.at("eq_atol").get<double>(), 1e-6);
  EXPECT_DOUBLE_EQ(t.at("rank_rtol").get<double>(), 1e-12);
}
