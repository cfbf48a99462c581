// gcs: run scenario files and emit JSON reports.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gcs/scenario.hpp"

using namespace gcs;

namespace {

struct Common {
  std::string scenario, out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool strict = false;
};

void add_common(CLI::App* sub, Common& c, bool need_scenario) {
  auto* s = sub->add_option("--scenario", c.scenario, "scenario file (TOML)");
  if (need_scenario) s->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "directory for <task>.report.json and CSV dumps");
  sub->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t v) { c.seed = v, c.seed_set = true; }, "override the scenario seed");
  sub->add_flag("--strict", c.strict, "reject unknown scenario keys and validate reports against the schema");
}

int run_kinds(const Common& c, std::vector<std::string> kinds) {
  Scenario sc = load_scenario(c.scenario, c.strict);
  RunOptions o;
  o.out_dir = c.out;
  o.strict = c.strict;
  o.only = std::move(kinds);
  if (c.seed_set) o.seed = c.seed;
  RunResult r = run(sc, o);
  if (r.tasks.empty()) std::fprintf(stderr, "no matching tasks in %s\n", c.scenario.c_str());
  for (auto& t : r.tasks) {
    std::string outcome = t.report["outcome"].get<std::string>();
    std::printf("%-4s %-14s %-24s outcome=%s expect=%s\n", t.passed ? "ok" : "FAIL", t.kind.c_str(), t.name.c_str(),
                outcome.c_str(), t.report["expect"].get<std::string>().c_str());
    if (!t.report["error"].is_null())
      std::printf("     %s: %s\n", t.report["error"]["kind"].get<std::string>().c_str(),
                  t.report["error"]["message"].get<std::string>().c_str());
    if (c.out.empty()) std::cout << dump_report(t.report);
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized-coefficient PDE toolkit"};
  app.require_subcommand(1);
  Common c;

  auto* run_cmd = app.add_subcommand("run", "run every task of a scenario");
  add_common(run_cmd, c, true);

  const char* kinds[] = {"compare", "ellipticity", "fundsol", "solve-bp", "parametrix", "sobolev-check", "solve-weak",
                         "hypotheses"};
  std::vector<CLI::App*> per_kind;
  for (const char* k : kinds) {
    auto* s = app.add_subcommand(k, std::string("run the ") + k + " tasks of a scenario");
    add_common(s, c, true);
    per_kind.push_back(s);
  }

  // classify takes either a scenario or an inline net
  std::string net;
  auto* cls = app.add_subcommand("classify", "classify a net given inline or the classify tasks of a scenario");
  add_common(cls, c, false);
  cls->add_option("--net", net, "eps expression, e.g. \"eps^-3\"");

  std::string schema_out;
  auto* sch = app.add_subcommand("schema", "print the report schema");
  sch->add_option("--out", schema_out, "write schema.json into this directory instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_kinds(c, {});
    for (size_t i = 0; i < per_kind.size(); ++i)
      if (per_kind[i]->parsed()) {
        std::vector<std::string> only{kinds[i]};
        if (only[0] == std::string("solve-bp")) only.push_back("hypotheses");
        return run_kinds(c, only);
      }
    if (cls->parsed()) {
      if (!c.scenario.empty()) return run_kinds(c, {"classify"});
      if (net.empty()) {
        std::fprintf(stderr, "classify needs --scenario or --net\n");
        return 2;
      }
      Scenario sc;
      sc.name = "inline";
      TaskSpec t;
      t.kind = t.name = "classify";
      t.params = Json{{"net", net}};
      sc.tasks.push_back(t);
      RunOptions o;
      o.out_dir = c.out;
      o.strict = c.strict;
      if (c.seed_set) o.seed = c.seed;
      RunResult r = run(sc, o);
      if (c.out.empty()) std::cout << dump_report(r.tasks[0].report);
      return r.exit_code;
    }
    if (sch->parsed()) {
      std::string doc = dump_report(report_schema());
      if (schema_out.empty()) {
        std::cout << doc;
      } else {
        std::filesystem::create_directories(schema_out);
        std::ofstream(std::filesystem::path(schema_out) / "schema.json") << doc;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", error_kind_name(e.kind()), e.what());
    return 2;
  }
  return 0;
}
