#include "gcs/psdo.hpp"

#include <algorithm>
#include <random>

namespace gcs {

DenseOp quantize(const VarSymbol& a, const TorusGrid& g, size_t k, const Point& theta) {
  return DenseOp(g, a.table(g, k, theta));
}

std::vector<GridField> random_battery(const TorusGrid& g, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  const double band = g.dxi() * g.N / 4;
  std::vector<GridField> out;
  for (int i = 0; i < count; ++i) {
    std::vector<cplx> w(g.size());
    for (size_t m = 0; m < w.size(); ++m) {
      double r = norm(g.freq(m), g.n);
      cplx z(nd(rng), nd(rng));  // draw regardless, keeps the stream aligned across grids of one size
      if (r <= band) w[m] = z / japanese(r);
    }
    out.push_back(from_spectrum(g, w));
  }
  return out;
}

SobolevBound sobolev_bound(const VarSymbol& a, const TorusGrid& g, double s, double m, int battery, unsigned seed,
                           Exec exec) {
  const EpsGrid& e = a.eps();
  const size_t K = e.size();
  auto bat = random_battery(g, battery, seed);
  std::vector<cplx> C(K);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    DenseOp A = quantize(a, g, k);
    double mx = 0;
    for (auto& u : bat) mx = std::max(mx, sobolev_norm(A.apply(u, Exec::Serial), s - m) / sobolev_norm(u, s));
    C[k] = mx;
  }
  SobolevBound sb;
  sb.C = GenNumber(e, C);
  sb.cls = classify(sb.C);
  return sb;
}

namespace {

Point offset(const TorusGrid& g, const Point& x, const Point& x0) {
  Point d{0, 0, 0};
  for (int i = 0; i < g.n; ++i) {
    double t = std::fmod(x[i] - x0[i] + g.L / 2, g.L);
    if (t < 0) t += g.L;
    d[i] = t - g.L / 2;
  }
  return d;
}

}  // namespace

std::vector<GridField> test_battery(const TorusGrid& g, const Point& x0, double delta, int count) {
  std::vector<GridField> out;
  auto bump = [&](const Point& x) { return plateau(2 * torus_distance(g, x, x0) / delta); };
  for (int s = 0; static_cast<int>(out.size()) < count && s <= 8; ++s)
    for (auto& be : multi_indices(g.n, s)) {
      if (abs_index(be) != s || static_cast<int>(out.size()) >= count / 2) continue;
      out.push_back(GridField::from_function(g, [&](const Point& x) {
        Point d = offset(g, x, x0);
        double p = 1;
        for (int i = 0; i < 3; ++i)
          for (int q = 0; q < be[i]; ++q) p *= d[i] / delta;
        return cplx(bump(x) * p);
      }));
    }
  // modulated bumps, low frequencies first
  std::vector<size_t> idx(g.size());
  for (size_t m = 0; m < idx.size(); ++m) idx[m] = m;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return norm(g.freq(a), g.n) < norm(g.freq(b), g.n); });
  for (size_t m : idx) {
    if (static_cast<int>(out.size()) >= count) break;
    Point xi = g.freq(m);
    if (norm(xi, g.n) == 0) continue;
    out.push_back(GridField::from_function(g, [&](const Point& x) {
      Point d = offset(g, x, x0);
      return bump(x) * std::polar(1.0, xi[0] * d[0] + xi[1] * d[1] + xi[2] * d[2]);
    }));
  }
  return out;
}

InequalityCheck support_inequality(const std::vector<GridField>& battery, double delta, double m) {
  InequalityCheck ic;
  for (auto& p : battery) {
    double r = sobolev_norm(p, m) / (2 * delta * sobolev_norm(p, m + 1));
    ic.worst = std::max(ic.worst, r);
  }
  ic.holds = ic.worst <= 1.0;
  return ic;
}

InvSobReport check_inv_sob(const VarSymbol& a, const TorusGrid& g, const Point& x0, double delta, double s, int count,
                           Exec exec) {
  const EpsGrid& e = a.eps();
  const size_t K = e.size();
  auto bat = test_battery(g, x0, delta, count);
  InvSobReport r;
  r.battery_size = bat.size();
  r.worst.assign(K, 0);
  std::vector<cplx> lam(K);
  std::vector<char> degen(K, 0);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    DenseOp A = quantize(a, g, k);
    double mx = 0;
    for (size_t i = 0; i < bat.size(); ++i) {
      double d = l2_norm(A.adjoint(bat[i], Exec::Serial));
      if (!(d > 1e-14 * l2_norm(bat[i]))) {
        degen[k] = 1;
        break;
      }
      double q = sobolev_norm(bat[i], s) / d;
      if (q > mx) {
        mx = q;
        r.worst[k] = i;
      }
    }
    lam[k] = mx;
  }
  for (size_t k = 0; k < K; ++k)
    if (degen[k]) fail(ErrorKind::AdjointDegenerate, "A* annihilates a test function at eps = " + std::to_string(e[k]));
  r.lambda = GenNumber(e, lam);
  r.cls = classify(r.lambda);
  r.verdict = r.cls.moderate();
  r.inequality = support_inequality(bat, delta, s);
  return r;
}

RealPartProfile real_part_profile(const VarSymbol& a, const TorusGrid& g, double m) {
  const EpsGrid& e = a.eps();
  const size_t K = e.size(), M = g.size();
  double rmax = 0;
  for (size_t j = 0; j < M; ++j) rmax = std::max(rmax, norm(g.freq(j), g.n));
  std::vector<Eigen::MatrixXd> re(K);
  std::vector<double> rho(K);
  for (size_t k = 0; k < K; ++k) {
    re[k] = a.table(g, k).real();
    double s = 0, mn = kInfExponent;
    int c = 0;
    for (size_t mm = 0; mm < M; ++mm) {
      double r = norm(g.freq(mm), g.n);
      if (r < rmax / 2) continue;
      double w = std::pow(japanese(r), m);
      for (size_t j = 0; j < M; ++j) {
        double v = re[k](j, mm) / w;
        s += v;
        mn = std::min(mn, v);
        ++c;
      }
    }
    if (!(mn > 0)) fail(ErrorKind::ProfileFails, "real part is not positive at large xi (eps = " + std::to_string(e[k]) + ")");
    rho[k] = s / c;
  }
  std::vector<double> x, y;
  for (size_t k = e.tail_begin(); k < K; ++k) {
    x.push_back(std::log10(e[k]));
    y.push_back(std::log10(rho[k]));
  }
  LineFit f = fit_line(x, y);
  RealPartProfile p;
  p.b = f.slope;
  p.c0 = std::pow(10.0, f.intercept);
  p.m = m;
  // residual Re a - c0 eps^b <xi>^m
  std::vector<cplx> rn(K);
  double order = -kInfExponent;
  for (size_t k = 0; k < K; ++k) {
    double lead = p.c0 * std::pow(e[k], p.b);
    double sup = 0;
    std::vector<double> lx, ly;
    for (size_t mm = 0; mm < M; ++mm) {
      double r = norm(g.freq(mm), g.n);
      double w = std::pow(japanese(r), m);
      double mx = 0;
      for (size_t j = 0; j < M; ++j) mx = std::max(mx, std::abs(re[k](j, mm) - lead * w));
      sup = std::max(sup, mx / std::pow(japanese(r), m - 1));
      if (r >= 2 && mx > 0) {
        lx.push_back(std::log(japanese(r)));
        ly.push_back(std::log(mx));
      }
    }
    rn[k] = sup;
    if (lx.size() >= 2 && sup > 1e-12 * lead) order = std::max(order, fit_line(lx, ly).slope);
  }
  auto cls = classify(GenNumber(e, rn));
  p.residual_exponent = cls.all_zero ? kInfExponent : cls.fitted_exponent;
  p.residual_order = std::isfinite(order) ? order : -kInfExponent;
  p.pass = f.rms < 0.05 && p.residual_order <= m - 1 + 0.1 && p.residual_exponent >= p.b - 0.1;
  if (!p.pass)
    fail(ErrorKind::ProfileFails, "real part does not split as c0 eps^b <xi>^m plus order m-1 (b = " +
                                      std::to_string(p.b) + ", residual order " + std::to_string(p.residual_order) + ")");
  return p;
}

WeakSolveReport weak_solve(const VarSymbol& a, const TorusGrid& g, const NetField& F, const Point& x0, double delta,
                           double s, const WeakSolveOptions& o) {
  if (F.grid != g) fail(ErrorKind::GridMismatch, "right-hand side lives on another grid");
  const EpsGrid& e = a.eps();
  require_same_grid(F.eps, e);
  const size_t K = e.size(), M = g.size();
  const double band = g.dxi() * g.N / 4;

  // test space: bump-modulated lattice modes, orthonormalised
  std::vector<GridField> V;
  for (size_t m = 0; m < M; ++m) {
    Point xi = g.freq(m);
    if (norm(xi, g.n) > band) continue;
    V.push_back(GridField::from_function(g, [&](const Point& x) {
      Point d = offset(g, x, x0);
      return plateau(2 * torus_distance(g, x, x0) / delta) * std::polar(1.0, xi[0] * d[0] + xi[1] * d[1] + xi[2] * d[2]);
    }));
  }
  Eigen::MatrixXcd Phi(M, V.size());
  for (size_t c = 0; c < V.size(); ++c)
    for (size_t j = 0; j < M; ++j) Phi(j, c) = V[c][j];
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(Phi, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  long rank = 0;
  while (rank < sv.size() && sv(rank) > o.rank_tol * sv(0)) ++rank;
  Eigen::MatrixXcd U = svd.matrixU().leftCols(rank);

  WeakSolveReport rep;
  rep.dim_V = V.size();
  rep.rank_V = static_cast<size_t>(rank);
  rep.eps = e.values();
  rep.weak_residual.assign(K, 0);
  rep.strong_residual.assign(K, 0);
  rep.cond.assign(K, 0);
  rep.t_norm.assign(K, 0);
  rep.bound.assign(K, 0);
  rep.solution = NetField(g, e);
  const auto inner_mask = ball_mask(g, x0, delta / 2);
  InvSobReport lam;
  bool have_lam = true;
  try {
    lam = check_inv_sob(a, g, x0, delta, s, 32, o.exec);
  } catch (const Error&) {
    have_lam = false;
  }
  std::vector<char> bad(K, 0);
  const bool par = o.exec == Exec::Parallel;
  const double hn = g.cell();
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    DenseOp A = quantize(a, g, k);
    Eigen::MatrixXcd B(M, rank);
    GridField col(g);
    for (long c = 0; c < rank; ++c) {
      for (size_t j = 0; j < M; ++j) col[j] = U(j, c);
      GridField b = A.adjoint(col, Exec::Serial);
      for (size_t j = 0; j < M; ++j) B(j, c) = b[j];
    }
    Eigen::MatrixXcd G = hn * (B.adjoint() * B);
    Eigen::VectorXcd Fv(M);
    for (size_t j = 0; j < M; ++j) Fv(j) = F.f[k][j];
    Eigen::VectorXcd f = hn * (U.adjoint() * Fv);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    const auto& ev = es.eigenvalues();
    double lmax = ev.size() ? ev(ev.size() - 1) : 0, lmin = ev.size() ? ev(0) : 0;
    double cond = lmin > 0 ? lmax / lmin : kInfExponent;
    rep.cond[k] = cond;
    if (!(cond <= o.max_cond)) {
      bad[k] = 1;
      continue;
    }
    double floor = o.ridge * lmax;
    Eigen::VectorXcd y = es.eigenvectors().adjoint() * f;
    for (long i = 0; i < y.size(); ++i) y(i) /= std::max(ev(i), floor);
    Eigen::VectorXcd c = es.eigenvectors() * y;
    Eigen::VectorXcd t = B * c;
    double fn = f.norm();
    rep.weak_residual[k] = fn > 0 ? (G * c - f).norm() / fn : (G * c - f).norm();
    GridField tk(g);
    for (size_t j = 0; j < M; ++j) tk[j] = t(j);
    GridField At = A.apply(tk, Exec::Serial);
    double Fn = l2_norm_on(F.f[k], inner_mask);
    double rn = l2_norm_on(At - F.f[k], inner_mask);
    rep.strong_residual[k] = Fn > 0 ? rn / Fn : rn;
    rep.t_norm[k] = l2_norm(tk);
    rep.bound[k] = have_lam ? 2 * lam.lambda[k].real() * sobolev_norm(F.f[k], -s) : kInfExponent;
    rep.solution.f[k] = std::move(tk);
  }
  for (size_t k = 0; k < K; ++k)
    if (bad[k])
      fail(ErrorKind::IllConditioned, "Gram condition number " + std::to_string(rep.cond[k]) + " at eps = " +
                                          std::to_string(e[k]) +
                                          (have_lam ? "" : " (inv_Sob fails on the battery)"));
  std::vector<cplx> tn(rep.t_norm.begin(), rep.t_norm.end());
  rep.t_class = classify(GenNumber(e, tn));
  return rep;
}

}  // namespace gcs
