// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "gcs/bptype.hpp"
#include "gcs/compare.hpp"
#include "gcs/fundsol.hpp"
#include "gcs/parametrix.hpp"
#include "gcs/psdo.hpp"

using namespace gcs;

namespace {

EpsGrid E;

GenNumber net(const std::string& s) { return GenNumber::from_expr(E, s); }
GenNumber one() { return GenNumber::constant(E, 1.0); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char b[96];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

template <class V>
double worst(const V& v) {
  double m = 0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// ---- 1 ----
Outcome weight_closed_forms() {
  Outcome o;
  ConstSymbol P(1, E);  // a xi + i, a = 1/eps
  P.add_term({1, 0, 0}, net("1/eps"));
  P.add_term({0, 0, 0}, GenNumber::constant(E, cplx(0, 1)));
  GenNumber w = P.weight_sq({0, 0, 0});
  std::vector<cplx> even(E.size()), odd(E.size());
  for (size_t k = 0; k < E.size(); ++k) {
    even[k] = k % 2 ? 0.0 : 1.0;
    odd[k] = k % 2 ? 1.0 : 0.0;
  }
  ConstSymbol I(2, E);
  I.add_term({1, 0, 0}, GenNumber(E, even));
  I.add_term({0, 1, 0}, cplx(0, 1) * GenNumber(E, odd));
  GenNumber wi = I.weight_sq({1, 1, 0});
  double e1 = 0, e2 = 0;
  for (size_t k = 0; k < E.size(); ++k) {
    double a = 1 / E[k];
    e1 = std::max(e1, std::abs(w[k] - (1 + a * a)) / (1 + a * a));
    e2 = std::max(e2, std::abs(wi[k] - 2.0));
  }
  o.require(E.size() == 25, "eps grid is not 25 points");
  o.require(e1 <= 1e-12, fmt("affine rel err %.2e", e1));
  o.require(e2 <= 1e-12, fmt("indicator err %.2e", e2));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("affine rel err %.1e", e1) + fmt(", indicator err %.1e", e2);
  return o;
}

// ---- 2 ----
Outcome two_scale_suite() {
  Outcome o;
  const double a = 1, b = 0, c = 1;
  std::string ea = "eps^" + std::to_string(a), eb = "eps^" + std::to_string(b), ec = "eps^" + std::to_string(c);
  ConstSymbol P0(2, E);
  P0.add_term({2, 0, 0}, net(ea));
  P0.add_term({0, 2, 0}, -1.0 * net(eb));
  ConstSymbol P1 = ConstSymbol::monomial(2, {1, 0, 0}, net(ea));
  ConstSymbol P2 = ConstSymbol::monomial(2, {0, 1, 0}, net(eb));
  ConstSymbol P3 = ConstSymbol::constant(2, net(ec));

  // the three printed chains, checked pointwise on the comparison sample set
  CompareOptions co;
  auto xs = xi_samples(2, co.samples);
  size_t bad = 0;
  for (size_t k = 0; k < E.size(); ++k) {
    double e2a = std::pow(E[k], 2 * a), e2b = std::pow(E[k], 2 * b), e2c = std::pow(E[k], 2 * c);
    for (const Point& xi : xs) {
      double w0 = P0.weight_sq_at(xi, k), slack = 1e-12 * w0;
      if (P1.weight_sq_at(xi, k) > w0 + slack) ++bad;
      if (P2.weight_sq_at(xi, k) > w0 + slack) ++bad;
      if (P3.weight_sq_at(xi, k) > w0 + slack) ++bad;
    }
    if (e2c > 4 * e2a + 4 * e2b) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " pointwise violations");
  double lam = 0;
  for (auto* Q : {&P1, &P2, &P3}) {
    auto r = is_stronger(*Q, P0, co);
    o.require(r.verdict, "is_stronger failed");
    for (size_t k = 0; k < E.size(); ++k) lam = std::max(lam, std::abs(r.lambda[k]));
  }
  o.require(lam <= 1, fmt("lambda %.3g > 1", lam));
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(xs.size()) + " xi samples" + fmt(", max lambda %.3g", lam);
  return o;
}

ConstSymbol wave_P0() {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, one());
  P.add_term({0, 2, 0}, net("-1/eps"));
  return P;
}

// ---- 3 ----
Outcome lambda_certificate() {
  Outcome o;
  auto r = is_stronger(ConstSymbol::monomial(2, {0, 1, 0}, one()), wave_P0());
  double excess = -1e300;
  for (size_t k = 0; k < E.size(); ++k) excess = std::max(excess, std::abs(r.lambda[k]) - 0.5 * E[k]);
  o.require(r.verdict, "is_stronger failed");
  o.require(excess <= 1e-10, fmt("lambda - eps/2 = %.2e", excess));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("max lambda - eps/2 = %.2e", excess);
  return o;
}

// ---- 4 ----
Outcome elliptic_suite() {
  Outcome o;
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, net("eps^0.5"));
  P.add_term({0, 2, 0}, net("eps^0.5"));
  P = P + ConstSymbol::constant(2, one());
  int ok = 0;
  for (auto al : multi_indices(2, 2)) {
    auto r = is_stronger(ConstSymbol::monomial(2, al, one()), P);
    bool good = r.verdict && r.lambda_class.verdict == Verdict::Moderate;
    ok += good;
    o.require(good, "D^" + index_str(al, 2) + " " + status_name(r.status) + "/" + verdict_name(r.lambda_class.verdict));
  }
  auto neg = is_stronger(ConstSymbol::monomial(2, {2, 0, 0}, one()), ConstSymbol::monomial(2, {1, 1, 0}, one()));
  o.require(!neg.verdict, "xi1^2 vs xi1 xi2 did not fail");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(ok) + "/6 monomials, xi1 xi2 case " + status_name(neg.status);
  return o;
}

// ---- 5 ----
Outcome fundsol_check(int N1, int N2, double tol) {
  Outcome o;
  TorusGrid g1(1, 2 * kPi, N1);
  ConstSymbol P = ConstSymbol::monomial(1, {2, 0, 0}, one()) + ConstSymbol::constant(1, one());
  auto F = fundamental_solution(P, g1);
  double r1 = worst(F.residual);

  // dense circulant oracle built straight from the DFT sum
  GridField d = GridField::delta(g1);
  double dense = 0;
  for (size_t k : {size_t(0), size_t(12), size_t(24)}) {
    Eigen::MatrixXcd A(N1, N1);
    for (int j = 0; j < N1; ++j)
      for (int l = 0; l < N1; ++l) {
        cplx s = 0;
        for (int m = -N1 / 2; m < N1 / 2; ++m) {
          double xi = m * g1.dxi();
          s += P.eval({xi + F.theta[0], 0, 0}, k) * std::exp(cplx(0, xi * (g1.node(j)[0] - g1.node(l)[0])));
        }
        A(j, l) = s * g1.h() / g1.L;
      }
    Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(d.v.data(), N1);
    Eigen::VectorXcd e = A.partialPivLu().solve(rhs);
    double scale = e.cwiseAbs().maxCoeff(), diff = 0;
    for (int j = 0; j < N1; ++j) diff = std::max(diff, std::abs(e[j] - F.E.f[k][j]));
    dense = std::max(dense, diff / scale);
  }

  TorusGrid g2(2, 2 * kPi, N2);
  auto F2 = fundamental_solution(wave_P0(), g2);
  double r2 = worst(F2.residual);
  o.require(r1 <= tol, fmt("1D residual %.2e", r1));
  o.require(dense <= tol, fmt("dense mismatch %.2e", dense));
  o.require(r2 <= tol, fmt("2D residual %.2e", r2));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("N=%g", N1) + fmt("/%g", N2) + fmt(": residual 1D %.1e", r1) +
              fmt(", 2D %.1e", r2) + fmt(", dense %.1e", dense);
  return o;
}

// ---- 6 ----
Outcome bp_check(int N, double tol) {
  Outcome o;
  BPOperator bp(wave_P0());
  ConstSymbol D1 = ConstSymbol::monomial(2, {1, 0, 0}, one()), D2 = ConstSymbol::monomial(2, {0, 1, 0}, one());
  bp.terms.push_back({CoeffField::expr("eps*sin(x)*sin(y)"), D1, "c1"});
  bp.terms.push_back({CoeffField::expr("0.5*sin(x)*cos(y)"), D2, "c2"});
  bp.terms.push_back({CoeffField::expr("eps*sin(x+y)"), ConstSymbol::constant(2, one()), "c3"});
  bp.validate();
  TorusGrid g(2, 2 * kPi, N);
  auto F = f0_for(bp, g);
  SolverOptions so;
  auto ds = find_delta(bp, F, g, so);
  double tail = 0;
  for (size_t k = E.tail_begin(); k < E.size(); ++k) tail = std::max(tail, ds.accepted_factor[k]);
  NetField rhs = NetField::from_expr(g, E, Expr::parse("exp(-4*((x-0.1)^2+(y+0.2)^2))"));
  auto r = solve_local(bp, F, rhs, ds.delta, so);
  double res = worst(r.residual), gap = -1e300;
  for (size_t i = 0; i < r.eps.size(); ++i) gap = std::max(gap, r.max_ratio[i] - r.contraction[i]);
  o.require(tail <= 0.5, fmt("tail contraction %.3f", tail));
  o.require(res <= tol, fmt("residual %.2e", res));
  o.require(gap <= 0.05, fmt("Neumann ratio exceeds factor by %.3f", gap));
  o.require(!r.eps.empty(), "no eps accepted");
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("N=%g", N) + fmt(": delta %.3f", ds.delta) +
              fmt(", tail factor %.3f", tail) + fmt(", residual %.1e", res) + fmt(", ratio-factor %.3f", gap);
  return o;
}

// ---- 7 ----
Outcome parametrix_check(int N, double tol) {
  Outcome o;
  TorusGrid g(1, 2 * kPi, N);
  Expr w = Expr::parse("1/(1+log(1/eps))");
  std::map<MultiIndex, CoeffField> c;
  c[{2, 0, 0}] = CoeffField::expr("eps^(-0.5)");
  c[{1, 0, 0}] = CoeffField::mollified(g, E, Expr::parse("0.3*sign(sin(x))"), w);
  c[{0, 0, 0}] = CoeffField::mollified(g, E, Expr::parse("0.1+0.2*i*sign(cos(x))"), w);
  VarSymbol P = VarSymbol::differential(1, E, c);
  HypoProfile prof{-0.5, -0.5, 2, 0.5, 0};
  auto t = parametrix_terms(P, g, prof, 4);
  double tel = 0;
  for (int j = 1; j <= 3; ++j) tel = std::max(tel, worst(t.telescoping[j]));
  auto s = asymptotic_sum(t);
  auto rem = compose_remainder(P, g, s);
  NetField F = NetField::from_expr(g, E, Expr::parse("exp(-4*(x-0.1)^2)"));
  auto sol = solve_via_parametrix(P, g, s, F, {0, 0, 0});
  double res = worst(sol.residual);
  double slope = rem.l1_class.fitted_exponent;
  o.require(slope >= -0.1, fmt("remainder slope %.3f", slope));
  o.require(tel <= tol * 1e-2, fmt("telescoping %.2e", tel));
  o.require(res <= tol, fmt("solve residual %.2e", res));
  o.require(!sol.eps.empty(), "no eps accepted");
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("N=%g", N) + fmt(": remainder slope %.3f", slope) +
              fmt(", telescoping %.1e", tel) + fmt(", residual %.1e", res);
  return o;
}

// ---- 8 ----
Outcome sobolev_check(int N, double tol) {
  Outcome o;
  TorusGrid g(1, 2 * kPi, N);
  NetField F = NetField::from_expr(g, E, Expr::parse("exp(-4*x^2)"));
  std::string ex;
  double wres = 0;
  for (double b : {0.0, 0.5, 1.0}) {
    VarSymbol a = VarSymbol::expr(1, E, Expr::parse("eps^" + std::to_string(b) + "*((1+xi^2)+0.3*i*sin(x)*xi)"), 2);
    auto r = check_inv_sob(a, g, {0, 0, 0}, 1.0, 1.0);
    double e = r.cls.fitted_exponent;
    o.require(r.verdict, fmt("inv_Sob fails at b=%g", b));
    o.require(std::abs(e + b) <= 0.2, fmt("exponent off at b=%g", b) + fmt(" (%.3f)", e));
    o.require(r.inequality.holds, fmt("support inequality fails at b=%g", b));
    auto ws = weak_solve(a, g, F, {0, 0, 0}, 1.0, 1.0);
    wres = std::max(wres, worst(ws.weak_residual));
    ex += (ex.empty() ? "" : ",") + fmt("%.3f", e);
  }
  o.require(wres <= tol, fmt("weak residual %.2e", wres));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("N=%g", N) + ": exponents " + ex + fmt(", weak residual %.1e", wres);
  return o;
}

// ---- 9 ----
Outcome classifier() {
  Outcome o;
  auto a = classify(net("eps^-3")), b = classify(net("eps^5")), c = classify(net("exp(-1/eps)")),
       d = classify(net("log(1/eps)"));
  o.require(a.verdict == Verdict::Moderate && std::abs(a.fitted_exponent + 3) <= 0.05, "eps^-3");
  o.require(b.verdict == Verdict::Moderate && std::abs(b.fitted_exponent - 5) <= 0.05, "eps^5");
  o.require(c.verdict == Verdict::Negligible, std::string("exp(-1/eps) ") + verdict_name(c.verdict));
  o.require(d.verdict == Verdict::SlowScale, std::string("log(1/eps) ") + verdict_name(d.verdict));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("slopes %.3f", a.fitted_exponent) + fmt(", %.3f", b.fitted_exponent) +
              ", " + verdict_name(c.verdict) + ", " + verdict_name(d.verdict);
  return o;
}

struct Timed {
  Outcome o;
  double sec = 0;
};

Timed timed(const std::function<Outcome()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t;
  try {
    t.o = f();
  } catch (const std::exception& e) {
    t.o.pass = false;
    t.o.detail = std::string("threw: ") + e.what();
  }
  t.sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

int failures = 0;

void report(int id, const char* name, const Timed& t, double limit) {
  bool ok = t.o.pass && (limit <= 0 || t.sec < limit);
  if (!ok) ++failures;
  std::string lim = limit > 0 ? fmt(" < %g s", limit) : "";
  std::printf("%s %2d %s: %s [%.2f s%s]\n", ok ? "PASS" : "FAIL", id, name, t.o.detail.c_str(), t.sec, lim.c_str());
  if (t.o.pass && !ok) std::printf("     runtime limit exceeded\n");
  std::fflush(stdout);
}

}  // namespace

int main() {
  report(1, "weight_sq closed forms", timed(weight_closed_forms), 1);
  report(2, "two-scale inequality suite", timed(two_scale_suite), 5);
  report(3, "lambda = eps/2 certificate", timed(lambda_certificate), 0);
  report(4, "elliptic vs monomials", timed(elliptic_suite), 10);

  // tolerances at N; relaxed x10 at N/2 for the grid check
  auto c5 = [](int s, double f) { return [=] { return fundsol_check(256 / s, 64 / s, 1e-10 * f); }; };
  auto c6 = [](int s, double f) { return [=] { return bp_check(64 / s, 1e-6 * f); }; };
  auto c7 = [](int s, double f) { return [=] { return parametrix_check(32 / s, 1e-6 * f); }; };
  auto c8 = [](int s, double f) { return [=] { return sobolev_check(32 / s, 1e-8 * f); }; };

  Timed t5 = timed(c5(1, 1)), t6 = timed(c6(1, 1)), t7 = timed(c7(1, 1)), t8 = timed(c8(1, 1));
  report(5, "fundamental solution exactness", t5, 10);
  report(6, "BP local solver", t6, 120);
  report(7, "parametrix remainder", t7, 120);
  report(8, "Sobolev condition", t8, 60);

  Timed h5 = timed(c5(2, 10)), h6 = timed(c6(2, 10)), h7 = timed(c7(2, 10)), h8 = timed(c8(2, 10));
  Timed g;
  g.sec = h5.sec + h6.sec + h7.sec + h8.sec;
  int n_ok = t5.o.pass + t6.o.pass + t7.o.pass + t8.o.pass, h_ok = h5.o.pass + h6.o.pass + h7.o.pass + h8.o.pass;
  g.o.pass = n_ok == 4 && h_ok == 4;
  g.o.detail = std::to_string(n_ok) + "/4 at N, " + std::to_string(h_ok) + "/4 at N/2";
  for (auto* h : {&h5, &h6, &h7, &h8}) g.o.detail += " | " + h->o.detail;
  report(9, "classifier calibration", timed(classifier), 0);
  report(10, "grid robustness N and N/2", g, 0);

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
