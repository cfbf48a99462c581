#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gcs/scenario.hpp"

using namespace gcs;

namespace {

const std::string kSrc = GCS_SOURCE_DIR;

std::string read(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string parse_error(const std::string& text, bool strict = false) {
  try {
    parse_scenario(text, "t.toml", strict);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    return e.what();
  }
  return "";
}

const char* kSmall = R"(
[scenario]
name = "small"

[symbols.P]
dim = 1
terms = [ { alpha = [2], c = "eps^0.5" }, { alpha = [0], c = "1" } ]

[symbols.Q]
dim = 1
terms = [ { alpha = [1], c = "1" } ]

[[tasks]]
kind = "compare"
name = "q-weaker"
Q = "Q"
P = "P"

[[tasks]]
kind = "compare"
name = "p-weaker"
Q = "P"
P = "Q"
expect = "fail"

[[tasks]]
kind = "classify"
name = "pole"
net = "eps^-2"
)";

}  // namespace

TEST(Scenario, ParseErrorsCarryLineAndColumn) {
  std::string m = parse_error("[scenario]\nname = \"x\"\n[grid\n");
  EXPECT_EQ(m.rfind("t.toml:3:", 0), 0u) << m;
  m = parse_error("[symbols.P]\ndim = 2\nterms = [ { alpha = [1, -1], c = \"1\" } ]\n");
  EXPECT_NE(m.find("t.toml:3:"), std::string::npos) << m;
  EXPECT_NE(m.find("malformed multi-index"), std::string::npos) << m;
  m = parse_error("[symbols.P]\ndim = 2\nterms = [ { alpha = [1], c = \"1\" } ]\n");
  EXPECT_NE(m.find("malformed multi-index"), std::string::npos) << m;
}

TEST(Scenario, StrictRejectsUnknownKeys) {
  std::string text = "[scenario]\nname = \"x\"\ncolour = 3\n";
  EXPECT_NO_THROW(parse_scenario(text, "t.toml", false));
  std::string m = parse_error(text, true);
  EXPECT_NE(m.find("unknown key 'colour'"), std::string::npos) << m;
  EXPECT_EQ(m.rfind("t.toml:3:", 0), 0u) << m;
  std::string task = std::string(kSmall) + "bogus = 1\n";
  EXPECT_NE(parse_error(task, true).find("unknown key 'bogus'"), std::string::npos);
}

TEST(Scenario, RejectsBadReferencesAndExpectations) {
  std::string m = parse_error("[[tasks]]\nkind = \"compare\"\nQ = \"A\"\nP = \"B\"\n");
  EXPECT_EQ(m.rfind("t.toml:3:", 0), 0u) << m;
  EXPECT_NE(m.find("no symbol named 'A'"), std::string::npos) << m;
  EXPECT_FALSE(parse_error("[[tasks]]\nkind = \"classify\"\nnet = \"eps\"\nexpect = \"maybe\"\n").empty());
  EXPECT_FALSE(parse_error("[[tasks]]\nkind = \"teleport\"\n").empty());
  EXPECT_FALSE(parse_error("[grid]\nN = 7\n").empty());
}

TEST(Runner, ExpectationsDecidePassing) {
  Scenario sc = parse_scenario(kSmall);
  ASSERT_EQ(sc.tasks.size(), 3u);
  RunResult r = run(sc);
  EXPECT_EQ(r.exit_code, 0);
  for (auto& t : r.tasks) EXPECT_TRUE(t.passed) << t.name;
  EXPECT_EQ(r.tasks[1].report["outcome"], "fail");
  EXPECT_EQ(r.tasks[1].report["expect"], "fail");

  // flipping an expectation makes the run fail
  sc.tasks[0].expect.kind = Expectation::Kind::Fail;
  EXPECT_EQ(run(sc).exit_code, 1);
}

TEST(Runner, ErrorExpectation) {
  Scenario sc = load_scenario(kSrc + "/scenarios/no-contraction.toml", true);
  RunResult r = run(sc);
  ASSERT_EQ(r.tasks.size(), 1u);
  const Json& rep = r.tasks[0].report;
  EXPECT_EQ(rep["outcome"], "error");
  EXPECT_EQ(rep["error"]["kind"], "NoContraction");
  EXPECT_TRUE(rep["result"].is_null());
  EXPECT_EQ(r.exit_code, 0);
}

TEST(Runner, DeterministicReports) {
  Scenario sc = load_scenario(kSrc + "/scenarios/sobolev-1d.toml", true);
  RunResult a = run(sc), b = run(sc);
  ASSERT_EQ(a.tasks.size(), b.tasks.size());
  for (size_t i = 0; i < a.tasks.size(); ++i) EXPECT_EQ(dump_report(a.tasks[i].report), dump_report(b.tasks[i].report));
  RunOptions o;
  o.seed = 99;
  EXPECT_EQ(run(sc, o).tasks[0].report["seed"], 99);
}

TEST(Runner, WritesReportsAndCsv) {
  auto dir = std::filesystem::temp_directory_path() / "gcs_cli_test";
  std::filesystem::remove_all(dir);
  Scenario sc = load_scenario(kSrc + "/scenarios/parametrix-1d.toml", true);
  RunOptions o;
  o.out_dir = dir.string();
  o.strict = true;
  RunResult r = run(sc, o);
  EXPECT_EQ(r.exit_code, 0);
  for (auto& t : r.tasks) {
    auto p = dir / (t.name + ".report.json");
    ASSERT_TRUE(std::filesystem::exists(p)) << p;
    EXPECT_EQ(read(p.string()), dump_report(t.report));
    for (auto& [suffix, body] : t.csv) EXPECT_TRUE(std::filesystem::exists(dir / (t.name + "." + suffix + ".csv")));
  }
  std::filesystem::remove_all(dir);
}

TEST(Schema, MatchesGoldenFile) {
  // a change here needs a schema version bump and a regenerated tests/golden/schema.json
  std::string golden = read(kSrc + "/tests/golden/schema.json");
  ASSERT_FALSE(golden.empty());
  Json g = Json::parse(golden);
  EXPECT_EQ(g["id"], kReportSchema);
  EXPECT_EQ(dump_report(report_schema()), golden);
}

TEST(Schema, ShippedScenarioReportsValidate) {
  Json schema = report_schema();
  for (const char* f : {"classify-calibration", "two-scale", "parametrix-1d", "sobolev-1d", "no-contraction"}) {
    Scenario sc = load_scenario(kSrc + "/scenarios/" + f + ".toml", true);
    RunResult r = run(sc);
    EXPECT_EQ(r.exit_code, 0) << f;
    for (auto& t : r.tasks) {
      auto err = validate_report(t.report, schema, true);
      EXPECT_TRUE(err.empty()) << f << "/" << t.name << ": " << (err.empty() ? "" : err[0]);
    }
  }
}

TEST(Schema, RejectsUnknownAndMissingFields) {
  Scenario sc = parse_scenario(kSmall);
  Json rep = run_task(sc, sc.tasks[0], 1).report;
  Json schema = report_schema();
  ASSERT_TRUE(validate_report(rep, schema, true).empty());

  Json extra = rep;
  extra["result"]["stronger"]["surprise"] = 1;
  EXPECT_FALSE(validate_report(extra, schema, true).empty());
  EXPECT_TRUE(validate_report(extra, schema, false).empty());

  Json missing = rep;
  missing["result"].erase("stronger");
  EXPECT_FALSE(validate_report(missing, schema, false).empty());

  Json wrong = rep;
  wrong["outcome"] = "maybe";
  EXPECT_FALSE(validate_report(wrong, schema, false).empty());
}
