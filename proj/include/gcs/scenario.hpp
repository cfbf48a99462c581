#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcs/bptype.hpp"
#include "gcs/parametrix.hpp"
#include "gcs/psdo.hpp"

namespace gcs {

using Json = nlohmann::ordered_json;

// What a task is expected to do. Error expectations name an ErrorKind.
struct Expectation {
  enum class Kind { Pass, Fail, Error } kind = Kind::Pass;
  ErrorKind error = ErrorKind::Task;
};

struct TaskSpec {
  std::string kind;  // classify compare ellipticity hypotheses fundsol solve-bp parametrix sobolev-check solve-weak
  std::string name;  // report file stem
  Json params;       // remaining keys of the task table
  Expectation expect;
  int line = 0;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 12345;
  EpsGrid eps;
  TorusGrid grid;
  std::map<std::string, ConstSymbol> symbols;
  std::map<std::string, VarSymbol> varsyms;
  std::optional<BPOperator> op;
  std::optional<Expr> rhs;
  SolverOptions solver;
  std::vector<TaskSpec> tasks;
};

// Throws Error(Parse) with "origin:line:col: message". Strict mode rejects unknown keys.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>", bool strict = false);
Scenario load_scenario(const std::string& path, bool strict = false);

struct TaskResult {
  std::string name, kind;
  bool verdict_bearing = true;
  bool passed = false;  // observed outcome matches the expectation
  Json report;
  std::vector<std::pair<std::string, std::string>> csv;  // (suffix, contents)
};

struct RunOptions {
  std::string out_dir;                 // empty: no files written
  std::optional<std::uint64_t> seed;   // overrides the scenario seed
  bool strict = false;                 // validate every report against the schema
  std::vector<std::string> only;       // task kinds to run; empty runs all
};

struct RunResult {
  int exit_code = 0;  // 0 iff every verdict-bearing task passed
  std::vector<TaskResult> tasks;
};

RunResult run(const Scenario& sc, const RunOptions& o = {});
TaskResult run_task(const Scenario& sc, const TaskSpec& t, std::uint64_t seed);

// Versioned schema for every report document.
constexpr const char* kReportSchema = "gcs.report/1";
Json report_schema();
// Empty when valid. Strict mode forbids keys the schema does not list.
std::vector<std::string> validate_report(const Json& doc, const Json& schema, bool strict = false);

// Shortest round-trip number formatting, fixed key order.
std::string dump_report(const Json& doc);

}  // namespace gcs
