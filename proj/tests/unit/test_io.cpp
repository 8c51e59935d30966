#include <filesystem>
#include <fstream>

#include "epkit_cli/io.hpp"
#include "test_util.hpp"

using namespace epkit;
using io::json;

TEST(MatrixJson, RoundTrip) {
  const ComplexMatrix m = testutil::gaussian(3, 3, 5);
  const json j = io::matrix_to_json(m);
  EXPECT_EQ(j.at("version"), "1");
  EXPECT_EQ(j.at("rows"), 3);
  EXPECT_EQ(j.at("cols"), 5);
  EXPECT_EQ(j.at("data").size(), 3U);
  EXPECT_EQ(j.at("data")[0].size(), 5U);
  EXPECT_EQ(io::matrix_from_json(j), m);
  EXPECT_EQ(io::matrix_from_json(json::parse(j.dump())), m);
}

TEST(MatrixJson, SchemaErrors) {
  const json good = io::matrix_to_json(ComplexMatrix::identity(2));
  auto broken = [&](auto edit) {
    json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["version"] = "2"; })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j.erase("data"); })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["rows"] = 3; })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["rows"] = 0; })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["data"][0].push_back({0.0, 0.0}); })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["data"][0][0] = {1.0}; })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["data"][0][0] = {"1", 0.0}; })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(broken([](json& j) { j["cols"] = "two"; })), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(json::array()), io::ParseError);
}

TEST(MatrixJson, ReadFileErrors) {
  EXPECT_THROW(io::read_matrix_file("/nonexistent/matrix.json"), io::ParseError);
  const auto path = std::filesystem::temp_directory_path() / "epkit_io_malformed.json";
  std::ofstream(path) << "{\"version\": \"1\", \"rows\": ";
  EXPECT_THROW(io::read_matrix_file(path.string()), io::ParseError);
  std::filesystem::remove(path);
}

TEST(ReportJson, ClassificationRoundTrip) {
  const ClassificationReport r = classify(testutil::gaussian(5, 4, 4));
  io::ReportFile f{"0.1.0", {}, r, std::nullopt};
  const io::ReportFile back = io::report_file_from_json(json::parse(io::report_file_to_json(f).dump()));
  EXPECT_EQ(back.tool_version, "0.1.0");
  EXPECT_EQ(back.tolerance, ToleranceConfig{});
  EXPECT_EQ(std::get<ClassificationReport>(back.payload), r);
  EXPECT_FALSE(back.wall_time_ms.has_value());
}

TEST(ReportJson, VerdictRoundTripWithCounterexample) {
  RunOptions faulty;
  faulty.inject_fault = true;
  GeneratorSpec s;
  s.dim = 4;
  s.rank = 2;
  TheoremVerdict v = run_theorem_check("thm2.1", s, 4, {}, faulty);
  ASSERT_TRUE(v.counterexample.has_value());
  v.elapsed_ms = 17;
  io::ReportFile timed{"x", {1e-9, 1e-7}, v, 23};
  const io::ReportFile back = io::report_file_from_json(json::parse(io::report_file_to_json(timed).dump()));
  EXPECT_EQ(std::get<TheoremVerdict>(back.payload), v);
  EXPECT_EQ(back.wall_time_ms, 23);
  EXPECT_EQ(back.tolerance, (ToleranceConfig{1e-9, 1e-7}));

  io::ReportFile untimed{"x", {}, v, std::nullopt};
  const json j = io::report_file_to_json(untimed);
  EXPECT_FALSE(j.at("payload").contains("elapsed_ms"));
  EXPECT_FALSE(j.contains("wall_time_ms"));
  TheoremVerdict expected = v;
  expected.elapsed_ms = 0;
  EXPECT_EQ(std::get<TheoremVerdict>(io::report_file_from_json(j).payload), expected);
}

TEST(ReportJson, SuiteAndLimitStudyRoundTrip) {
  SuiteResult s = run_suite(2, 3);
  for (auto& v : s.verdicts) v.elapsed_ms = 0;
  const auto back = io::report_file_from_json(io::report_file_to_json({"x", {}, s, std::nullopt}));
  EXPECT_EQ(std::get<SuiteResult>(back.payload).verdicts, s.verdicts);

  const LimitStudy l = limit_study(ModelFamilyId::diag_alternating, 7);
  const auto lback = io::report_file_from_json(json::parse(io::report_file_to_json({"x", {}, l, std::nullopt}).dump()));
  EXPECT_EQ(std::get<LimitStudy>(lback.payload), l);
}

TEST(ReportJson, RejectsUnknownKind) {
  json j = io::report_file_to_json({"x", {}, classify(ComplexMatrix::identity(2)), std::nullopt});
  j["kind"] = "mystery";
  EXPECT_THROW(io::report_file_from_json(j), io::ParseError);
  j["kind"] = "classification";
  j["tolerance"]["eq_atol"] = 2.0;
  EXPECT_THROW(io::report_file_from_json(j), io::ParseError);
}
