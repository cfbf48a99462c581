#include "gcs/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace gcs {

namespace {

struct Ctx {
  std::string origin;
  bool strict = false;
};

[[noreturn]] void perr(const Ctx& c, const toml::node* n, const std::string& msg) {
  std::ostringstream os;
  os << c.origin;
  if (n) os << ':' << n->source().begin.line << ':' << n->source().begin.column;
  os << ": " << msg;
  fail(ErrorKind::Parse, os.str());
}

void check_keys(const Ctx& c, const toml::table& t, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!c.strict) return;
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto&& [k, v] : t)
    if (!ok.count(std::string(k.str()))) perr(c, &v, "unknown key '" + std::string(k.str()) + "' in " + where);
}

const toml::table& as_table(const Ctx& c, const toml::node& n, const std::string& what) {
  if (auto t = n.as_table()) return *t;
  perr(c, &n, what + " must be a table");
}

// numbers or constant expressions such as "2*pi"
double number(const Ctx& c, const toml::node& n, const std::string& what) {
  if (auto v = n.value<double>()) return *v;
  if (auto s = n.value<std::string>()) {
    try {
      Expr e = Expr::parse(*s);
      if (e.depends_on_x() || e.depends_on_eps() || e.depends_on_xi()) perr(c, &n, what + " must be a constant");
      return e.eval({}).real();
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::Parse && std::string(err.what()).rfind(c.origin, 0) == 0) throw;
      perr(c, &n, what + ": " + err.what());
    }
  }
  perr(c, &n, what + " must be a number");
}

double number_or(const Ctx& c, const toml::table& t, const char* key, double dflt) {
  auto n = t.get(key);
  return n ? number(c, *n, key) : dflt;
}

int integer(const Ctx& c, const toml::node& n, const std::string& what) {
  if (auto v = n.value_exact<int64_t>()) return static_cast<int>(*v);
  perr(c, &n, what + " must be an integer");
}

std::string string(const Ctx& c, const toml::node& n, const std::string& what) {
  if (auto v = n.value_exact<std::string>()) return *v;
  perr(c, &n, what + " must be a string");
}

const toml::node& required(const Ctx& c, const toml::table& t, const char* key, const std::string& where) {
  if (auto n = t.get(key)) return *n;
  perr(c, &t, "missing key '" + std::string(key) + "' in " + where);
}

Expr expression(const Ctx& c, const toml::node& n, const std::string& what) {
  if (auto v = n.value<double>()) return Expr::constant(*v);
  std::string s = string(c, n, what);
  try {
    return Expr::parse(s);
  } catch (const Error& e) {
    perr(c, &n, what + ": " + e.what());
  }
}

Point point(const Ctx& c, const toml::node& n, int dim, const std::string& what) {
  auto a = n.as_array();
  if (!a || static_cast<int>(a->size()) != dim) perr(c, &n, what + " must be an array of " + std::to_string(dim) + " numbers");
  Point p{0, 0, 0};
  for (int i = 0; i < dim; ++i) p[i] = number(c, *a->get(i), what);
  return p;
}

MultiIndex multi_index(const Ctx& c, const toml::node& n, int dim) {
  auto a = n.as_array();
  if (!a || static_cast<int>(a->size()) != dim)
    perr(c, &n, "malformed multi-index: expected " + std::to_string(dim) + " non-negative integers");
  MultiIndex m{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    auto v = a->get(i)->value_exact<int64_t>();
    if (!v || *v < 0 || *v > 16) perr(c, a->get(i), "malformed multi-index: entries must be integers in 0..16");
    m[i] = static_cast<int>(*v);
  }
  return m;
}

int dimension(const Ctx& c, const toml::table& t, const std::string& where) {
  int d = integer(c, required(c, t, "dim", where), "dim");
  if (d < 1 || d > 3) perr(c, t.get("dim"), "dim must be 1, 2 or 3");
  return d;
}

// net coefficient: expression or explicit samples
GenNumber net(const Ctx& c, const toml::node& n, const EpsGrid& e, const std::string& what) {
  if (auto a = n.as_array()) {
    if (a->size() != e.size())
      perr(c, &n, what + ": sample list has " + std::to_string(a->size()) + " entries, eps grid has " +
                      std::to_string(e.size()));
    std::vector<cplx> s;
    for (auto& x : *a) s.emplace_back(number(c, x, what));
    return GenNumber(e, s);
  }
  Expr ex = expression(c, n, what);
  if (ex.depends_on_x() || ex.depends_on_xi()) perr(c, &n, what + " may only depend on eps");
  return GenNumber::from_expr(e, ex);
}

ConstSymbol const_symbol(const Ctx& c, const toml::table& t, const EpsGrid& e, const std::string& where) {
  check_keys(c, t, {"dim", "terms"}, where);
  int dim = dimension(c, t, where);
  ConstSymbol P(dim, e);
  auto terms = required(c, t, "terms", where).as_array();
  if (!terms) perr(c, t.get("terms"), "terms must be an array of tables");
  for (auto& tn : *terms) {
    auto& tt = as_table(c, tn, "term");
    check_keys(c, tt, {"alpha", "c"}, "term of " + where);
    P.add_term(multi_index(c, required(c, tt, "alpha", "term"), dim), net(c, required(c, tt, "c", "term"), e, "c"));
  }
  return P;
}

CoeffField coeff(const Ctx& c, const toml::table& tt, const TorusGrid& g, const EpsGrid& e) {
  if (auto m = tt.get("mollify")) {
    Expr f = expression(c, *m, "mollify");
    Expr w = tt.get("width") ? expression(c, *tt.get("width"), "width") : Expr::parse("1/(1+log(1/eps))");
    return CoeffField::mollified(g, e, f, w);
  }
  Expr ex = expression(c, required(c, tt, "c", "term"), "c");
  if (ex.depends_on_xi()) perr(c, tt.get("c"), "coefficients may not depend on xi");
  return CoeffField::expr(ex);
}

VarSymbol var_symbol(const Ctx& c, const toml::table& t, const TorusGrid& g, const EpsGrid& e, const std::string& where) {
  check_keys(c, t, {"dim", "terms", "expr", "order"}, where);
  int dim = dimension(c, t, where);
  if (dim != g.n) perr(c, t.get("dim"), where + ": dim differs from the grid dimension");
  if (auto ex = t.get("expr")) {
    double order = number(c, required(c, t, "order", where), "order");
    return VarSymbol::expr(dim, e, expression(c, *ex, "expr"), order);
  }
  auto terms = required(c, t, "terms", where).as_array();
  if (!terms) perr(c, t.get("terms"), "terms must be an array of tables");
  std::map<MultiIndex, CoeffField> m;
  for (auto& tn : *terms) {
    auto& tt = as_table(c, tn, "term");
    check_keys(c, tt, {"alpha", "c", "mollify", "width"}, "term of " + where);
    MultiIndex a = multi_index(c, required(c, tt, "alpha", "term"), dim);
    if (m.count(a)) perr(c, &tn, "repeated multi-index in " + where);
    m[a] = coeff(c, tt, g, e);
  }
  return VarSymbol::differential(dim, e, std::move(m));
}

Json to_json(const toml::node& n) {
  if (auto t = n.as_table()) {
    Json j = Json::object();
    for (auto&& [k, v] : *t) j[std::string(k.str())] = to_json(v);
    return j;
  }
  if (auto a = n.as_array()) {
    Json j = Json::array();
    for (auto& v : *a) j.push_back(to_json(v));
    return j;
  }
  if (auto v = n.value_exact<int64_t>()) return *v;
  if (auto v = n.value_exact<double>()) return *v;
  if (auto v = n.value_exact<bool>()) return *v;
  if (auto v = n.value_exact<std::string>()) return *v;
  return nullptr;
}

const std::map<std::string, std::set<std::string>>& task_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"classify", {"net", "verdict"}},
      {"compare", {"Q", "P", "mode"}},
      {"ellipticity", {"P", "mode", "samples"}},
      {"hypotheses", {"N", "h6_max_N"}},
      {"fundsol", {"P", "tol", "N"}},
      {"solve-bp", {"residual_tol", "csv"}},
      {"parametrix", {"P", "profile", "x0", "r", "J", "residual_tol", "telescoping_tol", "solve"}},
      {"sobolev-check", {"a", "x0", "delta", "s", "count", "exponent", "exponent_tol"}},
      {"solve-weak", {"a", "x0", "delta", "s", "weak_tol"}},
  };
  return k;
}

Expectation expectation(const Ctx& c, const toml::node& n) {
  std::string s = string(c, n, "expect");
  Expectation e;
  if (s == "pass") return e;
  if (s == "fail") {
    e.kind = Expectation::Kind::Fail;
    return e;
  }
  if (s.rfind("error:", 0) == 0) {
    std::string k = s.substr(6);
    for (int i = 0; i <= static_cast<int>(ErrorKind::InvalidArgument); ++i)
      if (k == error_kind_name(static_cast<ErrorKind>(i))) {
        e.kind = Expectation::Kind::Error;
        e.error = static_cast<ErrorKind>(i);
        return e;
      }
    perr(c, &n, "unknown error kind '" + k + "'");
  }
  perr(c, &n, "expect must be pass, fail or error:<Kind>");
}

void check_task(const Ctx& c, const Scenario& sc, const toml::table& tt, const TaskSpec& t) {
  auto sym = [&](const char* key) -> const ConstSymbol& {
    auto n = tt.get(key);
    if (!n) perr(c, &tt, t.kind + " task needs '" + key + "'");
    auto it = sc.symbols.find(string(c, *n, key));
    if (it == sc.symbols.end()) perr(c, n, "no symbol named '" + string(c, *n, key) + "'");
    return it->second;
  };
  auto var = [&](const char* key) -> const VarSymbol& {
    auto n = tt.get(key);
    if (!n) perr(c, &tt, t.kind + " task needs '" + key + "'");
    auto it = sc.varsyms.find(string(c, *n, key));
    if (it == sc.varsyms.end()) perr(c, n, "no variable symbol named '" + string(c, *n, key) + "'");
    return it->second;
  };
  auto need_rhs = [&] {
    if (!sc.rhs) perr(c, &tt, t.kind + " task needs an [rhs] block");
  };
  if (t.kind == "classify") {
    expression(c, required(c, tt, "net", "classify task"), "net");
  } else if (t.kind == "compare") {
    if (sym("Q").dim() != sym("P").dim()) perr(c, &tt, "compare: Q and P have different dimensions");
  } else if (t.kind == "ellipticity") {
    sym("P");
  } else if (t.kind == "fundsol") {
    if (sym("P").dim() != sc.grid.n) perr(c, &tt, "fundsol: symbol dimension differs from the grid");
  } else if (t.kind == "hypotheses" || t.kind == "solve-bp") {
    if (!sc.op) perr(c, &tt, t.kind + " task needs an [operator] block");
    if (sc.op->dim() != sc.grid.n) perr(c, &tt, "operator dimension differs from the grid");
    if (t.kind == "solve-bp") need_rhs();
  } else if (t.kind == "parametrix") {
    if (!var("P").is_differential()) perr(c, tt.get("P"), "parametrix needs a differential symbol (terms)");
    auto p = tt.get("profile");
    if (!p) perr(c, &tt, "parametrix task needs 'profile'");
    if (!p->is_table() && !(p->value<std::string>() && *p->value<std::string>() == "elliptic"))
      perr(c, p, "profile must be a table {a, a_prime, m_prime, R, c} or \"elliptic\"");
    if (auto pt = p->as_table()) check_keys(c, *pt, {"a", "a_prime", "m_prime", "R", "c"}, "profile");
    if (tt.get("solve") && tt.get("solve")->value_or(false)) need_rhs();
  } else if (t.kind == "sobolev-check") {
    var("a");
  } else if (t.kind == "solve-weak") {
    var("a");
    need_rhs();
  }
  for (const char* k : {"x0"})
    if (auto n = tt.get(k)) point(c, *n, sc.grid.n, k);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin, bool strict) {
  Ctx c{origin, strict};
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << origin << ':' << e.source().begin.line << ':' << e.source().begin.column << ": " << e.description();
    fail(ErrorKind::Parse, os.str());
  }
  check_keys(c, root, {"scenario", "eps", "grid", "symbols", "varsyms", "operator", "perturbation", "rhs", "solver", "tasks"},
             "top level");
  Scenario sc;
  sc.name = origin;
  if (auto s = root.get("scenario")) {
    auto& t = as_table(c, *s, "[scenario]");
    check_keys(c, t, {"name", "seed"}, "[scenario]");
    if (auto n = t.get("name")) sc.name = string(c, *n, "name");
    if (auto n = t.get("seed")) {
      int64_t v = n->value_exact<int64_t>().value_or(-1);
      if (v < 0) perr(c, n, "seed must be a non-negative integer");
      sc.seed = static_cast<std::uint64_t>(v);
    }
  }
  if (auto s = root.get("eps")) {
    auto& t = as_table(c, *s, "[eps]");
    check_keys(c, t, {"kind", "kmax", "ratio", "count", "values"}, "[eps]");
    std::string kind = t.get("kind") ? string(c, *t.get("kind"), "kind") : "dyadic";
    try {
      if (kind == "dyadic") {
        sc.eps = EpsGrid::dyadic(t.get("kmax") ? integer(c, *t.get("kmax"), "kmax") : 24);
      } else if (kind == "geometric") {
        sc.eps = EpsGrid::geometric(number(c, required(c, t, "ratio", "[eps]"), "ratio"),
                                    integer(c, required(c, t, "count", "[eps]"), "count"));
      } else if (kind == "explicit") {
        auto a = required(c, t, "values", "[eps]").as_array();
        if (!a) perr(c, t.get("values"), "values must be an array");
        std::vector<double> v;
        for (auto& x : *a) v.push_back(number(c, x, "values"));
        sc.eps = EpsGrid(v);
      } else {
        perr(c, t.get("kind"), "eps kind must be dyadic, geometric or explicit");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      perr(c, s, e.what());
    }
  }
  if (auto s = root.get("grid")) {
    auto& t = as_table(c, *s, "[grid]");
    check_keys(c, t, {"n", "L", "N"}, "[grid]");
    int n = t.get("n") ? integer(c, *t.get("n"), "n") : 1;
    int N = t.get("N") ? integer(c, *t.get("N"), "N") : 64;
    double L = number_or(c, t, "L", 2 * kPi);
    if (n < 1 || n > 3 || N < 4 || N % 2 || !(L > 0)) perr(c, s, "grid needs n in 1..3, even N >= 4 and L > 0");
    sc.grid = TorusGrid(n, L, N);
  }
  if (auto s = root.get("symbols")) {
    for (auto&& [k, v] : as_table(c, *s, "[symbols]")) {
      std::string name(k.str());
      sc.symbols.emplace(name, const_symbol(c, as_table(c, v, "symbol"), sc.eps, "[symbols." + name + "]"));
    }
  }
  if (auto s = root.get("varsyms")) {
    for (auto&& [k, v] : as_table(c, *s, "[varsyms]")) {
      std::string name(k.str());
      sc.varsyms.emplace(name, var_symbol(c, as_table(c, v, "symbol"), sc.grid, sc.eps, "[varsyms." + name + "]"));
    }
  }
  if (auto s = root.get("operator")) {
    auto& t = as_table(c, *s, "[operator]");
    check_keys(c, t, {"P0", "x0", "radius", "coefficients", "decompose"}, "[operator]");
    if (auto p0 = t.get("P0")) {
      auto it = sc.symbols.find(string(c, *p0, "P0"));
      if (it == sc.symbols.end()) perr(c, p0, "no symbol named '" + string(c, *p0, "P0") + "'");
      Point x0 = t.get("x0") ? point(c, *t.get("x0"), it->second.dim(), "x0") : Point{0, 0, 0};
      BPOperator bp(it->second, x0);
      if (auto pert = root.get("perturbation")) {
        for (auto&& [k, v] : as_table(c, *pert, "[perturbation]")) {
          auto& pt = as_table(c, v, "perturbation");
          check_keys(c, pt, {"c", "mollify", "width", "symbol"}, "[perturbation." + std::string(k.str()) + "]");
          auto sn = string(c, required(c, pt, "symbol", "perturbation"), "symbol");
          auto si = sc.symbols.find(sn);
          if (si == sc.symbols.end()) perr(c, pt.get("symbol"), "no symbol named '" + sn + "'");
          if (si->second.dim() != bp.dim()) perr(c, &v, "perturbation symbol dimension differs from P0");
          bp.terms.push_back({coeff(c, pt, sc.grid, sc.eps), si->second, std::string(k.str())});
        }
      }
      if (auto r = t.get("radius")) bp.radius = number(c, *r, "radius");
      try {
        bp.validate();
      } catch (const Error& e) {
        perr(c, s, std::string("operator: ") + e.what());
      }
      sc.op = std::move(bp);
    } else {
      // full coefficient list, decomposed at x0
      auto cn = string(c, required(c, t, "coefficients", "[operator]"), "coefficients");
      auto it = sc.varsyms.find(cn);
      if (it == sc.varsyms.end() || !it->second.is_differential())
        perr(c, t.get("coefficients"), "coefficients must name a differential [varsyms] entry");
      Point x0 = t.get("x0") ? point(c, *t.get("x0"), it->second.dim(), "x0") : Point{0, 0, 0};
      std::string how = t.get("decompose") ? string(c, *t.get("decompose"), "decompose") : "at-point";
      try {
        if (how == "at-point")
          sc.op = decompose_at_point(it->second.dim(), sc.eps, it->second.coeffs(), x0, false).op;
        else if (how == "second-order-2d")
          sc.op = decompose_2d_second_order(it->second.dim(), sc.eps, it->second.coeffs(), x0);
        else
          perr(c, t.get("decompose"), "decompose must be at-point or second-order-2d");
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse) throw;
        perr(c, s, std::string("operator: ") + error_kind_name(e.kind()) + ": " + e.what());
      }
      if (auto r = t.get("radius")) sc.op->radius = number(c, *r, "radius");
    }
  } else if (root.get("perturbation")) {
    perr(c, root.get("perturbation"), "[perturbation] blocks need an [operator] block");
  }
  if (auto s = root.get("rhs")) {
    auto& t = as_table(c, *s, "[rhs]");
    check_keys(c, t, {"expr"}, "[rhs]");
    Expr e = expression(c, required(c, t, "expr", "[rhs]"), "rhs");
    if (e.depends_on_xi()) perr(c, t.get("expr"), "rhs may not depend on xi");
    sc.rhs = e;
  }
  if (auto s = root.get("solver")) {
    auto& t = as_table(c, *s, "[solver]");
    check_keys(c, t, {"delta0", "p", "s", "nu", "f0", "cutoff_squared", "power_steps", "tol", "max_iter", "k_ladder"},
               "[solver]");
    auto& o = sc.solver;
    o.delta0 = number_or(c, t, "delta0", o.delta0);
    o.p = number_or(c, t, "p", o.p);
    o.s = number_or(c, t, "s", o.s);
    o.nu = number_or(c, t, "nu", o.nu);
    o.tol = number_or(c, t, "tol", o.tol);
    if (auto n = t.get("power_steps")) o.power_steps = integer(c, *n, "power_steps");
    if (auto n = t.get("max_iter")) o.max_iter = integer(c, *n, "max_iter");
    if (auto n = t.get("cutoff_squared")) o.cutoff_squared = n->value_or(false);
    if (auto n = t.get("k_ladder")) o.k_ladder = n->value_or(false);
    if (auto n = t.get("f0")) {
      std::string f = string(c, *n, "f0");
      if (f == "periodic") o.f0 = F0Kind::Periodic;
      else if (f == "truncated") o.f0 = F0Kind::Truncated;
      else perr(c, n, "f0 must be periodic or truncated");
    }
    if (!(o.p >= 1)) perr(c, s, "p must be >= 1");
  }
  if (auto s = root.get("tasks")) {
    auto a = s->as_array();
    if (!a) perr(c, s, "tasks must be an array of tables ([[tasks]])");
    std::set<std::string> names;
    for (auto& tn : *a) {
      auto& tt = as_table(c, tn, "task");
      TaskSpec t;
      t.line = static_cast<int>(tn.source().begin.line);
      t.kind = string(c, required(c, tt, "kind", "task"), "kind");
      auto ki = task_keys().find(t.kind);
      if (ki == task_keys().end()) perr(c, tt.get("kind"), "unknown task kind '" + t.kind + "'");
      t.name = tt.get("name") ? string(c, *tt.get("name"), "name") : t.kind;
      if (!names.insert(t.name).second) perr(c, &tn, "duplicate task name '" + t.name + "' (set name = ...)");
      if (auto e = tt.get("expect")) t.expect = expectation(c, *e);
      t.params = Json::object();
      for (auto&& [k, v] : tt) {
        std::string key(k.str());
        if (key == "kind" || key == "name" || key == "expect") continue;
        if (c.strict && !ki->second.count(key)) perr(c, &v, "unknown key '" + key + "' in " + t.kind + " task");
        t.params[key] = to_json(v);
      }
      check_task(c, sc, tt, t);
      sc.tasks.push_back(std::move(t));
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, path + ": cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path, strict);
}

}  // namespace gcs
