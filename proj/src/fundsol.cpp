#include "gcs/fundsol.hpp"

#include <algorithm>

namespace gcs {

GridField to_twisted(const GridField& u, const Point& theta) {
  GridField v(u.grid);
  for (size_t j = 0; j < u.size(); ++j) {
    Point x = u.grid.node(j);
    double ph = theta[0] * x[0] + theta[1] * x[1] + theta[2] * x[2];
    v[j] = u[j] * std::polar(1.0, -ph);
  }
  return v;
}

GridField from_twisted(const GridField& v, const Point& theta) {
  return to_twisted(v, {-theta[0], -theta[1], -theta[2]});
}

std::vector<cplx> symbol_table(const ConstSymbol& P, const TorusGrid& g, size_t k, const Point& theta) {
  return tabulate_symbol(g, [&](const Point& xi) { return P.eval(xi, k); }, theta);
}

std::vector<double> weight_table(const ConstSymbol& P, const TorusGrid& g, size_t k, const Point& theta) {
  std::vector<double> w(g.size());
  for (size_t j = 0; j < w.size(); ++j) {
    Point xi = g.freq(j);
    for (int d = 0; d < 3; ++d) xi[d] += theta[d];
    w[j] = P.weight_at(xi, k);
  }
  return w;
}

GridField apply_symbol(const ConstSymbol& P, size_t k, const GridField& u, const Point& theta) {
  return multiply_spectrum(u, symbol_table(P, u.grid, k, theta));
}

namespace {
double halton(int i, int base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}
}  // namespace

std::vector<Point> shift_candidates(const TorusGrid& g) {
  const double dx = g.dxi();
  std::vector<Point> c{{0, 0, 0}};
  Point half{0, 0, 0};
  for (int d = 0; d < g.n; ++d) half[d] = dx / 2;
  c.push_back(half);
  if (g.n > 1)
    for (int d = 0; d < g.n; ++d) {
      Point p{0, 0, 0};
      p[d] = dx / 2;
      c.push_back(p);
    }
  const int bases[3] = {2, 3, 5};
  for (int i = 1; i <= 8; ++i) {
    Point p{0, 0, 0};
    for (int d = 0; d < g.n; ++d) p[d] = dx * halton(i, bases[d]);
    c.push_back(p);
  }
  return c;
}

ShiftChoice choose_shift(const ConstSymbol& P, const TorusGrid& g, const ShiftOptions& o) {
  if (P.dim() != g.n) fail(ErrorKind::DimensionMismatch, "symbol and grid dimensions differ");
  ShiftChoice sc;
  sc.candidates = shift_candidates(g);
  const size_t K = P.grid().size();
  std::vector<std::vector<double>> per(sc.candidates.size(), std::vector<double>(K, 0));
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (long c = 0; c < static_cast<long>(sc.candidates.size()); ++c)
    for (long k = 0; k < static_cast<long>(K); ++k) {
      const Point& th = sc.candidates[c];
      double mn = kInfExponent;
      for (size_t j = 0; j < g.size(); ++j) {
        Point xi = g.freq(j);
        for (int d = 0; d < 3; ++d) xi[d] += th[d];
        double w = P.weight_at(xi, k);
        double r = w > 0 ? std::abs(P.eval(xi, k)) / w : 0.0;
        mn = std::min(mn, r);
      }
      per[c][k] = mn;
    }
  double best = -1;
  for (size_t c = 0; c < sc.candidates.size(); ++c) {
    bool ok = true;
    double s = kInfExponent;
    for (size_t k = 0; k < K; ++k) {
      s = std::min(s, per[c][k]);
      if (!(per[c][k] >= o.floor_const * std::pow(P.grid()[k], o.r_max))) ok = false;
    }
    sc.scores.push_back(s);
    sc.viable.push_back(ok);
    if (ok) best = std::max(best, s);
  }
  if (best < 0) fail(ErrorKind::NoViableShift, "every candidate shift meets a zero of the symbol");
  int pick = -1;
  for (size_t c = 0; c < sc.candidates.size(); ++c) {
    if (!sc.viable[c] || sc.scores[c] < o.tie_ratio * best) continue;
    if (pick < 0 || norm(sc.candidates[c], g.n) < norm(sc.candidates[pick], g.n)) pick = static_cast<int>(c);
  }
  sc.theta = sc.candidates[pick];
  sc.score = sc.scores[pick];
  sc.min_ratio = per[pick];
  return sc;
}

FundamentalSolution fundamental_solution(const ConstSymbol& P, const TorusGrid& g, Exec exec,
                                         const ShiftOptions& o) {
  ShiftChoice sc = choose_shift(P, g, o);
  FundamentalSolution fs = fundamental_solution(P, g, sc.theta, exec);
  fs.shift = std::move(sc);
  return fs;
}

FundamentalSolution fundamental_solution(const ConstSymbol& P, const TorusGrid& g, const Point& theta, Exec exec) {
  if (P.dim() != g.n) fail(ErrorKind::DimensionMismatch, "symbol and grid dimensions differ");
  FundamentalSolution fs;
  fs.grid = g;
  fs.theta = theta;
  const EpsGrid& eg = P.grid();
  const size_t K = eg.size();
  fs.E = NetField(g, eg);
  fs.residual.assign(K, 0);
  fs.b_inf.assign(K, 0);
  std::vector<cplx> mins(K), l2(K);
  std::vector<char> zero(K, 0);
  const GridField delta = GridField::delta(g);
  const double dnorm = l2_norm(delta);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    auto s = symbol_table(P, g, k, theta);
    auto w = weight_table(P, g, k, theta);
    std::vector<cplx> e(s.size());
    double mn = kInfExponent, binf = 0;
    for (size_t j = 0; j < s.size(); ++j) {
      double a = std::abs(s[j]);
      mn = std::min(mn, a);
      if (a == 0) {
        zero[k] = 1;
        continue;
      }
      e[j] = 1.0 / s[j];
      binf = std::max(binf, w[j] / a);
    }
    mins[k] = mn;
    fs.b_inf[k] = binf;
    fs.E.f[k] = from_spectrum(g, e);
    GridField r = multiply_spectrum(fs.E.f[k], s) - delta;
    fs.residual[k] = l2_norm(r) / dnorm;
    l2[k] = l2_norm(fs.E.f[k]);
  }
  for (size_t k = 0; k < K; ++k)
    if (zero[k]) fail(ErrorKind::NoViableShift, "symbol vanishes on the shifted lattice at eps = " + std::to_string(eg[k]));
  fs.min_symbol = GenNumber(eg, mins);
  fs.l2 = GenNumber(eg, l2);
  fs.l2_class = classify(fs.l2);
  return fs;
}

std::vector<double> b_inf_constant(const ConstSymbol& P, const FundamentalSolution& E, const GridField& chi) {
  std::vector<double> out(E.E.size());
  for (size_t k = 0; k < out.size(); ++k) {
    auto sp = spectrum(pointwise(chi, E.E.f[k]));
    auto w = weight_table(P, E.grid, k, E.theta);
    double m = 0;
    for (size_t j = 0; j < sp.size(); ++j) m = std::max(m, w[j] * std::abs(sp[j]));
    out[k] = m;
  }
  return out;
}

ConstSolve solve_constcoef(const ConstSymbol& P, const FundamentalSolution& E, const NetField& v, Exec exec) {
  if (v.grid != E.grid) fail(ErrorKind::GridMismatch, "right-hand side lives on another grid");
  require_same_grid(v.eps, P.grid());
  const size_t K = v.size();
  ConstSolve cs;
  cs.u = NetField(v.grid, v.eps);
  cs.residual.assign(K, 0);
  std::vector<cplx> nrm(K);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    auto s = symbol_table(P, v.grid, k, E.theta);
    auto w = spectrum(v.f[k]);
    for (size_t j = 0; j < w.size(); ++j) w[j] /= s[j];
    cs.u.f[k] = from_spectrum(v.grid, w);
    GridField r = multiply_spectrum(cs.u.f[k], s) - v.f[k];
    double vn = l2_norm(v.f[k]);
    cs.residual[k] = vn > 0 ? l2_norm(r) / vn : l2_norm(r);
    nrm[k] = l2_norm(cs.u.f[k]);
  }
  cs.norm = GenNumber(v.eps, nrm);
  cs.norm_class = classify(cs.norm);
  return cs;
}

}  // namespace gcs
