#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcs/scenario.hpp"

namespace gcs {

namespace {

Json j_point(const Point& p, int n) {
  Json a = Json::array();
  for (int i = 0; i < n; ++i) a.push_back(p[i]);
  return a;
}

Json j_vec(const std::vector<double>& v) { return Json(v); }

Json j_net(const GenNumber& g) {
  Json re = Json::array(), im = Json::array();
  for (size_t i = 0; i < g.size(); ++i) {
    re.push_back(g[i].real());
    im.push_back(g[i].imag());
  }
  return Json{{"re", re}, {"im", im}};
}

Json j_class(const ModeratenessReport& r) {
  return Json{{"verdict", verdict_name(r.verdict)},       {"fitted_exponent", r.fitted_exponent},
              {"fit_residual", r.fit_residual},           {"strictly_nonzero", r.strictly_nonzero},
              {"lower_exponent", r.lower_exponent},       {"all_zero", r.all_zero}};
}

Json j_comparison(const ComparisonReport& c, int n) {
  Json w = Json::array();
  for (auto& x : c.witnesses) w.push_back(Json{{"eps", x.eps}, {"xi", j_point(x.xi, n)}, {"ratio", x.ratio}});
  return Json{{"lambda", j_net(c.lambda)}, {"lambda_class", j_class(c.lambda_class)},
              {"xi_growth", c.xi_growth},  {"status", status_name(c.status)},
              {"verdict", c.verdict},      {"sample_count", c.sample_count},
              {"max_decade", c.max_decade}, {"witnesses", w}};
}

Json j_hypotheses(const HypothesisReport& h, int n) {
  Json terms = Json::array();
  for (auto& t : h.terms)
    terms.push_back(Json{{"name", t.name},
                         {"lambda", j_net(t.lambda)},
                         {"h3", t.h3},
                         {"lambda_valuation", t.lambda_valuation},
                         {"deriv_bound", j_net(t.deriv_bound)},
                         {"product_valuation", t.product_valuation},
                         {"h6_valuations", j_vec(t.h6_valuations)}});
  return Json{{"h1", h.h1}, {"h2", h.h2}, {"h3", h.h3}, {"h4", h.h4}, {"h5", h.h5}, {"h6", h.h6},
              {"h2_point", j_point(h.h2_point, n)}, {"h5_order", h.h5_order}, {"terms", terms}};
}

const Json& param(const TaskSpec& t, const char* key) {
  static const Json null;
  auto it = t.params.find(key);
  return it == t.params.end() ? null : *it;
}

double num(const TaskSpec& t, const char* key, double dflt) {
  const Json& j = param(t, key);
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return Expr::parse(j.get<std::string>()).eval({}).real();
  return dflt;
}

std::string str(const TaskSpec& t, const char* key, const std::string& dflt) {
  const Json& j = param(t, key);
  return j.is_string() ? j.get<std::string>() : dflt;
}

Point pt(const TaskSpec& t, const char* key, int n) {
  Point p{0, 0, 0};
  const Json& j = param(t, key);
  if (j.is_array())
    for (int i = 0; i < n && i < static_cast<int>(j.size()); ++i) p[i] = j[i].get<double>();
  return p;
}

double max_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::isfinite(x) ? x : kInfExponent);
  return m;
}

TorusGrid task_grid(const Scenario& sc, const TaskSpec& t) {
  int N = static_cast<int>(num(t, "N", sc.grid.N));
  return TorusGrid(sc.grid.n, sc.grid.L, N);
}

std::string field_csv(const NetField& f, const std::vector<size_t>& ks) {
  std::ostringstream os;
  os.precision(17);
  const TorusGrid& g = f.grid;
  os << "eps,index";
  for (int i = 0; i < g.n; ++i) os << ",x" << i + 1;
  os << ",re,im\n";
  for (size_t k : ks)
    for (size_t j = 0; j < g.size(); ++j) {
      Point x = g.node(j);
      os << f.eps[k] << ',' << j;
      for (int i = 0; i < g.n; ++i) os << ',' << x[i];
      os << ',' << f.f[k][j].real() << ',' << f.f[k][j].imag() << '\n';
    }
  return os.str();
}

// Each task fills r.report["result"] and returns the observed verdict.
bool task_classify(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  std::string src = param(t, "net").is_string() ? param(t, "net").get<std::string>() : param(t, "net").dump();
  GenNumber u = GenNumber::from_expr(sc.eps, src);
  auto c = classify(u);
  std::string want = str(t, "verdict", "");
  r.report["result"] = Json{{"net", src},
                            {"eps", j_vec(sc.eps.values())},
                            {"samples", j_net(u)},
                            {"class", j_class(c)},
                            {"valuation", valuation(u)}};
  return want.empty() ? c.moderate() : want == verdict_name(c.verdict);
}

bool task_compare(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  const ConstSymbol& Q = sc.symbols.at(str(t, "Q", ""));
  const ConstSymbol& P = sc.symbols.at(str(t, "P", ""));
  std::string mode = str(t, "mode", "stronger");
  Json res{{"mode", mode}, {"Q", str(t, "Q", "")}, {"P", str(t, "P", "")}};
  bool v;
  if (mode == "dominates") {
    auto d = dominates(Q, P);
    res["stronger"] = j_comparison(d.stronger, P.dim());
    res["domination"] = Json{{"t", j_vec(d.t)},          {"C_of_t", j_vec(d.C_of_t)}, {"gamma", d.gamma},
                             {"decay_ok", d.decay_ok},   {"uniform_ok", d.uniform_ok},
                             {"uniform_checks", d.uniform_checks}, {"verdict", d.verdict}};
    v = d.verdict;
  } else if (mode == "stronger") {
    auto c = is_stronger(Q, P);
    res["stronger"] = j_comparison(c, P.dim());
    res["domination"] = nullptr;
    v = c.verdict;
  } else {
    fail(ErrorKind::InvalidArgument, "compare mode must be stronger or dominates");
  }
  r.report["result"] = res;
  return v;
}

bool task_ellipticity(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  const ConstSymbol& P = sc.symbols.at(str(t, "P", ""));
  std::string mode = str(t, "mode", "g-elliptic");
  int samples = static_cast<int>(num(t, "samples", 720));
  EllipticityReport e;
  if (mode == "g-elliptic") e = is_g_elliptic(P, samples);
  else if (mode == "principal") e = is_principal_type(P, samples);
  else fail(ErrorKind::InvalidArgument, "ellipticity mode must be g-elliptic or principal");
  Json dirs = Json::array();
  for (auto& d : e.worst_direction) dirs.push_back(j_point(d, P.dim()));
  r.report["result"] = Json{{"mode", mode},        {"c", e.c},
                            {"a", e.a},            {"verdict", e.verdict},
                            {"inf_net", j_net(e.inf_net)}, {"inf_class", j_class(e.inf_class)},
                            {"worst_direction", dirs}};
  return e.verdict;
}

bool task_hypotheses(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  HypothesisOptions o;
  o.p = sc.solver.p;
  o.N = static_cast<int>(num(t, "N", 0));
  o.h6_max_N = static_cast<int>(num(t, "h6_max_N", 4));
  auto h = check_hypotheses(*sc.op, sc.grid, o);
  r.report["result"] = j_hypotheses(h, sc.grid.n);
  return h.h1 && h.h2 && h.h3 && h.h4 && h.h5 && h.h6;
}

bool task_fundsol(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  const ConstSymbol& P = sc.symbols.at(str(t, "P", ""));
  TorusGrid g = task_grid(sc, t);
  double tol = num(t, "tol", 1e-10);
  auto E = fundamental_solution(P, g);
  Json table = Json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "eps,residual,l2,b_inf\n";
  for (size_t k = 0; k < sc.eps.size(); ++k) {
    table.push_back(Json{{"eps", sc.eps[k]}, {"residual", E.residual[k]}, {"l2", E.l2[k].real()}, {"b_inf", E.b_inf[k]}});
    csv << sc.eps[k] << ',' << E.residual[k] << ',' << E.l2[k].real() << ',' << E.b_inf[k] << '\n';
  }
  double mr = max_of(E.residual);
  r.report["result"] = Json{{"N", g.N},
                            {"theta", j_point(E.theta, g.n)},
                            {"shift_score", E.shift.score},
                            {"table", table},
                            {"l2_class", j_class(E.l2_class)},
                            {"min_symbol", j_net(E.min_symbol)},
                            {"max_residual", mr},
                            {"tol", tol}};
  r.csv.emplace_back("residual", csv.str());
  return mr <= tol;
}

bool task_solve_bp(const Scenario& sc, const TaskSpec& t, TaskResult& r, std::uint64_t seed) {
  const BPOperator& bp = *sc.op;
  SolverOptions o = sc.solver;
  o.seed = static_cast<unsigned>(seed);
  double tol = num(t, "residual_tol", 1e-6);
  auto E = f0_for(bp, sc.grid);
  auto ds = find_delta(bp, E, sc.grid, o);
  NetField F = NetField::from_expr(sc.grid, sc.eps, *sc.rhs);
  auto s = solve_local(bp, E, F, ds.delta, o);
  Json table = Json::array();
  for (size_t i = 0; i < s.eps.size(); ++i)
    table.push_back(Json{{"eps", s.eps[i]},           {"contraction", s.contraction[i]},
                         {"iterations", s.iterations[i]}, {"residual", s.residual[i]},
                         {"max_ratio", s.max_ratio[i]},   {"g_norm", s.g_norm[i]},
                         {"T_norm", s.T_norm[i]}});
  Json kl = Json::array();
  for (auto& [sv, ok] : ds.k_ladder) kl.push_back(Json{{"s", sv}, {"holds", ok}});
  size_t head = std::count(ds.head_ok.begin(), ds.head_ok.end(), 1);
  double mr = max_of(s.residual), mc = max_of(s.contraction);
  r.report["result"] = Json{{"delta", ds.delta},
                            {"eps1", ds.eps1},
                            {"theta", j_point(E.theta, sc.grid.n)},
                            {"ladder", j_vec(ds.ladder)},
                            {"accepted_factor", j_vec(ds.accepted_factor)},
                            {"C1", j_vec(ds.C1)},
                            {"head_contracting", head},
                            {"k_ladder", kl},
                            {"table", table},
                            {"g_class", j_class(s.g_class)},
                            {"T_class", j_class(s.T_class)},
                            {"hypotheses", j_hypotheses(s.hypotheses, sc.grid.n)},
                            {"max_residual", mr},
                            {"max_contraction", mc},
                            {"residual_tol", tol}};
  if (!param(t, "csv").is_boolean() || param(t, "csv").get<bool>()) {
    std::vector<size_t> ks;
    if (!s.accepted.empty()) {
      ks.push_back(s.accepted.front());
      if (s.accepted.size() > 1) ks.push_back(s.accepted.back());
    }
    r.csv.emplace_back("T", field_csv(s.solution, ks));
  }
  return mr <= tol && mc <= 0.5;
}

Json j_profile(const HypoProfile& p) {
  return Json{{"a", p.a}, {"a_prime", p.a_prime}, {"m_prime", p.m_prime}, {"R", p.R}, {"c", p.c}};
}

bool task_parametrix(const Scenario& sc, const TaskSpec& t, TaskResult& r, std::uint64_t seed) {
  const VarSymbol& P = sc.varsyms.at(str(t, "P", ""));
  const TorusGrid& g = sc.grid;
  Point x0 = pt(t, "x0", g.n);
  int J = static_cast<int>(num(t, "J", 4));
  double rtol = num(t, "residual_tol", 1e-6), ttol = num(t, "telescoping_tol", 1e-8);
  ProfileCheck pc;
  Json res = Json::object();
  if (param(t, "profile").is_object()) {
    const Json& p = param(t, "profile");
    HypoProfile h;
    h.a = p.value("a", 0.0);
    h.a_prime = p.value("a_prime", h.a);
    h.m_prime = p.value("m_prime", P.order());
    h.R = p.value("R", 1.0);
    h.c = p.value("c", 0.0);
    pc = check_profile(P, g, h);
  } else {
    auto en = elliptic_near_point(P, g, x0, num(t, "r", 0.5));
    pc = en.check;
    res["elliptic"] = Json{{"c0", j_net(en.c0)}, {"a", en.a}, {"R_eps", j_vec(en.R_eps)}, {"capped", en.capped}};
  }
  res["profile_check"] = Json{{"pass", pc.pass},
                              {"cond_i", pc.cond_i},
                              {"cond_ii", pc.cond_ii},
                              {"cond_iii", pc.cond_iii},
                              {"i_exponent", pc.i_exponent},
                              {"c_ii", j_net(pc.c_ii)},
                              {"iii_exponent", pc.iii_exponent},
                              {"failed", pc.failed},
                              {"witness", pc.witness},
                              {"via_elliptic", pc.via_elliptic},
                              {"profile", j_profile(pc.profile)}};
  if (!pc.pass) fail(ErrorKind::ProfileFails, "condition " + pc.failed + " fails: " + pc.witness);
  auto terms = parametrix_terms(P, g, pc.profile, J);
  Json tj = Json::array();
  double tele = 0;
  for (int j = 0; j < J; ++j) {
    double tm = j >= 1 ? max_of(terms.telescoping[j]) : 0;
    if (j >= 1 && j <= 3) tele = std::max(tele, tm);
    tj.push_back(Json{{"j", j}, {"decay", terms.decay[j]}, {"weighted_sup", j_vec(terms.weighted_sup[j])},
                      {"telescoping_max", tm}});
  }
  res["terms"] = tj;
  res["telescoping_max"] = tele;
  auto sum = asymptotic_sum(terms);
  Json dropped = Json::array();
  for (char d : sum.dropped) dropped.push_back(static_cast<bool>(d));
  res["sum"] = Json{{"R", j_vec(sum.R)}, {"contribution", j_vec(sum.contribution)}, {"dropped", dropped}};
  auto rem = compose_remainder(P, g, sum);
  res["remainder"] = Json{{"sup_l1", j_vec(rem.sup_l1)},        {"sup_l3", j_vec(rem.sup_l3)},
                          {"l1_class", j_class(rem.l1_class)},  {"xi_growth", rem.xi_growth},
                          {"smoothing", rem.smoothing},         {"bounded", rem.bounded},
                          {"kernel_sup", j_vec(rem.kernel_sup)}, {"kernel_class", j_class(rem.kernel_class)}};
  auto left = left_remainder(P, g, sum);
  res["left_remainder"] = Json{{"sup", j_vec(left.sup)}, {"class", j_class(left.cls)}};
  std::ostringstream csv;
  csv.precision(17);
  csv << "eps,sup_l1,sup_l3,kernel_sup\n";
  for (size_t k = 0; k < sc.eps.size(); ++k)
    csv << sc.eps[k] << ',' << rem.sup_l1[k] << ',' << rem.sup_l3[k] << ',' << rem.kernel_sup[k] << '\n';
  r.csv.emplace_back("remainder", csv.str());
  bool ok = rem.bounded && tele <= ttol;
  res["solve"] = nullptr;
  if (param(t, "solve").is_boolean() && param(t, "solve").get<bool>()) {
    ParametrixSolveOptions so;
    so.seed = static_cast<unsigned>(seed);
    NetField F = NetField::from_expr(g, sc.eps, *sc.rhs);
    auto s = solve_via_parametrix(P, g, sum, F, x0, so);
    Json table = Json::array();
    for (size_t i = 0; i < s.eps.size(); ++i)
      table.push_back(Json{{"eps", s.eps[i]}, {"contraction", s.contraction[i]}, {"iterations", s.iterations[i]},
                           {"residual", s.residual[i]}, {"max_ratio", s.max_ratio[i]}});
    Json dc = Json::array();
    for (auto& c : s.derivative_classes) dc.push_back(j_class(c));
    double mr = max_of(s.residual);
    res["solve"] = Json{{"delta", s.delta}, {"eps1", s.eps1},          {"ladder", j_vec(s.ladder)},
                        {"table", table},   {"derivative_classes", dc}, {"regular", s.regular},
                        {"max_residual", mr}, {"residual_tol", rtol}};
    ok = ok && mr <= rtol;
    r.csv.emplace_back("T", field_csv(s.solution, {s.accepted.front(), s.accepted.back()}));
  }
  r.report["result"] = res;
  return ok;
}

bool task_sobolev(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  const VarSymbol& a = sc.varsyms.at(str(t, "a", ""));
  const TorusGrid& g = sc.grid;
  Point x0 = pt(t, "x0", g.n);
  double delta = num(t, "delta", 1.0), s = num(t, "s", 1.0);
  int count = static_cast<int>(num(t, "count", 32));
  auto rep = check_inv_sob(a, g, x0, delta, s, count);
  Json res{{"x0", j_point(x0, g.n)},
           {"delta", delta},
           {"s", s},
           {"battery_size", rep.battery_size},
           {"label", rep.label},
           {"lambda", j_net(rep.lambda)},
           {"class", j_class(rep.cls)},
           {"verdict", rep.verdict},
           {"worst", rep.worst},
           {"inequality", Json{{"holds", rep.inequality.holds}, {"worst", rep.inequality.worst}}}};
  bool ok = rep.verdict && rep.inequality.holds;
  res["exponent_target"] = nullptr;
  if (param(t, "exponent").is_number()) {
    double want = num(t, "exponent", 0), tol = num(t, "exponent_tol", 0.2);
    res["exponent_target"] = Json{{"value", want}, {"tol", tol}};
    ok = ok && std::abs(rep.cls.fitted_exponent - want) <= tol;
  }
  r.report["result"] = res;
  return ok;
}

bool task_weak(const Scenario& sc, const TaskSpec& t, TaskResult& r) {
  const VarSymbol& a = sc.varsyms.at(str(t, "a", ""));
  const TorusGrid& g = sc.grid;
  Point x0 = pt(t, "x0", g.n);
  double delta = num(t, "delta", 1.0), s = num(t, "s", 1.0), tol = num(t, "weak_tol", 1e-8);
  NetField F = NetField::from_expr(g, sc.eps, *sc.rhs);
  auto w = weak_solve(a, g, F, x0, delta, s);
  Json inv_j = nullptr;
  try {
    auto inv = check_inv_sob(a, g, x0, delta, s);
    inv_j = Json{{"verdict", inv.verdict}, {"label", inv.label}, {"fitted_exponent", inv.cls.fitted_exponent}};
  } catch (const Error&) {
  }
  Json table = Json::array();
  for (size_t k = 0; k < w.eps.size(); ++k)
    table.push_back(Json{{"eps", w.eps[k]},   {"weak_residual", w.weak_residual[k]},
                         {"strong_residual", w.strong_residual[k]}, {"cond", w.cond[k]},
                         {"t_norm", w.t_norm[k]}, {"bound", w.bound[k]}});
  double mw = max_of(w.weak_residual);
  r.report["result"] = Json{{"inv_sob", inv_j},
                            {"dim_V", w.dim_V},
                            {"rank_V", w.rank_V},
                            {"table", table},
                            {"t_class", j_class(w.t_class)},
                            {"max_weak_residual", mw},
                            {"weak_tol", tol}};
  return mw <= tol;
}

std::string expect_str(const Expectation& e) {
  switch (e.kind) {
    case Expectation::Kind::Pass: return "pass";
    case Expectation::Kind::Fail: return "fail";
    default: return std::string("error:") + error_kind_name(e.error);
  }
}

}  // namespace

TaskResult run_task(const Scenario& sc, const TaskSpec& t, std::uint64_t seed) {
  TaskResult r;
  r.name = t.name;
  r.kind = t.kind;
  r.report = Json{{"schema", kReportSchema}, {"scenario", sc.name}, {"task", t.name}, {"kind", t.kind},
                  {"seed", seed},            {"expect", expect_str(t.expect)}};
  bool observed = false;
  Json err = nullptr;
  try {
    if (t.kind == "classify") observed = task_classify(sc, t, r);
    else if (t.kind == "compare") observed = task_compare(sc, t, r);
    else if (t.kind == "ellipticity") observed = task_ellipticity(sc, t, r);
    else if (t.kind == "hypotheses") observed = task_hypotheses(sc, t, r);
    else if (t.kind == "fundsol") observed = task_fundsol(sc, t, r);
    else if (t.kind == "solve-bp") observed = task_solve_bp(sc, t, r, seed);
    else if (t.kind == "parametrix") observed = task_parametrix(sc, t, r, seed);
    else if (t.kind == "sobolev-check") observed = task_sobolev(sc, t, r);
    else if (t.kind == "solve-weak") observed = task_weak(sc, t, r);
    else fail(ErrorKind::Task, "unknown task kind " + t.kind);
  } catch (const Error& e) {
    err = Json{{"kind", error_kind_name(e.kind())},
               {"message", "task '" + t.name + "' (line " + std::to_string(t.line) + "): " + e.what()}};
  } catch (const std::exception& e) {
    err = Json{{"kind", error_kind_name(ErrorKind::Task)},
               {"message", "task '" + t.name + "' (line " + std::to_string(t.line) + "): " + e.what()}};
  }
  std::string outcome = !err.is_null() ? "error" : observed ? "pass" : "fail";
  switch (t.expect.kind) {
    case Expectation::Kind::Pass: r.passed = outcome == "pass"; break;
    case Expectation::Kind::Fail: r.passed = outcome == "fail"; break;
    case Expectation::Kind::Error:
      r.passed = outcome == "error" && err["kind"] == error_kind_name(t.expect.error);
      break;
  }
  if (!err.is_null() || !r.report.contains("result")) r.report["result"] = nullptr;
  // keep the envelope keys ahead of the payload
  Json res = std::move(r.report["result"]);
  r.report.erase("result");
  r.report["outcome"] = outcome;
  r.report["passed"] = r.passed;
  r.report["error"] = err;
  r.report["result"] = std::move(res);
  return r;
}

RunResult run(const Scenario& sc, const RunOptions& o) {
  RunResult rr;
  std::uint64_t seed = o.seed.value_or(sc.seed);
  Json schema = o.strict ? report_schema() : Json();
  if (!o.out_dir.empty()) std::filesystem::create_directories(o.out_dir);
  for (auto& t : sc.tasks) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), t.kind) == o.only.end()) continue;
    TaskResult r = run_task(sc, t, seed);
    if (o.strict) {
      auto errs = validate_report(r.report, schema, true);
      if (!errs.empty()) {
        r.passed = false;
        r.report["passed"] = false;
        r.report["error"] = Json{{"kind", "Task"}, {"message", "report fails schema: " + errs.front()}};
      }
    }
    if (!o.out_dir.empty()) {
      std::ofstream(std::filesystem::path(o.out_dir) / (t.name + ".report.json")) << dump_report(r.report);
      for (auto& [suffix, body] : r.csv)
        std::ofstream(std::filesystem::path(o.out_dir) / (t.name + "." + suffix + ".csv")) << body;
    }
    if (r.verdict_bearing && !r.passed) rr.exit_code = 1;
    rr.tasks.push_back(std::move(r));
  }
  return rr;
}

}  // namespace gcs
