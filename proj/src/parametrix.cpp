#include "gcs/parametrix.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace gcs {

namespace {

double radius(const TorusGrid& g, size_t m) { return norm(g.freq(m), g.n); }

double bracket_pow(const TorusGrid& g, size_t m, double s) { return std::pow(japanese(radius(g, m)), s); }

double max_radius(const TorusGrid& g) {
  double r = 0;
  for (size_t m = 0; m < g.size(); ++m) r = std::max(r, radius(g, m));
  return r;
}

double excision(double r, double R) { return R > 0 ? 1.0 - plateau(r / R) : 1.0; }

Eigen::MatrixXcd xderiv(const TorusGrid& g, const Eigen::MatrixXcd& T, const MultiIndex& beta) {
  if (abs_index(beta) == 0) return T;
  Eigen::MatrixXcd out(T.rows(), T.cols());
  GridField col(g);
  for (long m = 0; m < T.cols(); ++m) {
    for (long j = 0; j < T.rows(); ++j) col[j] = T(j, m);
    GridField d = spectral_derivative(col, beta);
    for (long j = 0; j < T.rows(); ++j) out(j, m) = d[j];
  }
  return out;
}

std::string eps_str(double e) {
  std::ostringstream os;
  os << e;
  return os.str();
}

// slope of log max over dyadic shells against log radius, over the outer three shells
double shell_growth(const TorusGrid& g, const std::function<double(size_t)>& val) {
  std::map<int, double> sh;
  for (size_t m = 0; m < g.size(); ++m) {
    double r = radius(g, m);
    if (r < 1) continue;
    int s = static_cast<int>(std::floor(std::log2(r) + 1e-12));
    sh[s] = std::max(sh[s], val(m));
  }
  std::vector<double> x, y;
  for (auto& [s, v] : sh)
    if (v > 0) {
      x.push_back(s * std::log10(2.0));
      y.push_back(std::log10(v));
    }
  if (x.size() < 2) return 0;
  size_t from = x.size() > 3 ? x.size() - 3 : 0;
  std::vector<double> xs(x.begin() + from, x.end()), ys(y.begin() + from, y.end());
  return fit_line(xs, ys).slope;
}

double fitted(const GenNumber& v, const ClassifyOptions& c) {
  auto r = classify(v, c);
  return r.all_zero ? kInfExponent : r.fitted_exponent;
}

}  // namespace

ProfileCheck check_profile(const VarSymbol& P, const TorusGrid& g, const HypoProfile& cand, const ProfileOptions& o) {
  ProfileCheck pc;
  pc.profile = cand;
  const EpsGrid& e = P.eps();
  const size_t K = e.size(), M = g.size();
  const double m = P.order();
  const int n = g.n;

  // (i)
  pc.cond_i = true;
  pc.i_exponent = kInfExponent;
  for (int s = 0; s <= o.max_order; ++s)
    for (auto& al : multi_indices(n, s)) {
      if (abs_index(al) > m && P.is_differential()) continue;
      if (!P.is_differential() && abs_index(al) > 0) {
        continue;  // no xi-derivatives for sampled symbols; (i) is checked in x only
      }
      for (int t = 0; t + s <= o.max_order; ++t)
        for (auto& be : multi_indices(n, t)) {
          if (abs_index(al) != s || abs_index(be) != t) continue;
          double v = fitted(P.seminorm_net(g, m, al, be), o.classify);
          if (v < pc.i_exponent) pc.i_exponent = v;
          if (v < cand.a - o.tol && pc.cond_i) {
            pc.cond_i = false;
            pc.failed = "i";
            pc.witness = "alpha=" + index_str(al, n) + " beta=" + index_str(be, n) + " exponent " + std::to_string(v);
          }
        }
    }

  // (ii)
  std::vector<cplx> cii(K);
  std::vector<Eigen::MatrixXcd> T0(K);
  bool any = false;
  for (size_t m2 = 0; m2 < M; ++m2) any |= radius(g, m2) >= cand.R;
  pc.cond_ii = any;
  for (size_t k = 0; k < K; ++k) {
    T0[k] = P.table(g, k);
    double mn = kInfExponent;
    for (size_t mm = 0; mm < M; ++mm) {
      if (radius(g, mm) < cand.R) continue;
      double w = std::pow(e[k], cand.a_prime) * bracket_pow(g, mm, cand.m_prime);
      mn = std::min(mn, T0[k].col(mm).cwiseAbs().minCoeff() / w);
    }
    cii[k] = any ? mn : 0.0;
    if (!(mn > 0) || mn < cand.c) {
      if (pc.cond_ii && pc.failed.empty()) {
        pc.failed = "ii";
        pc.witness = "eps=" + eps_str(e[k]) + " min ratio " + std::to_string(mn);
      }
      pc.cond_ii = false;
    }
  }
  pc.c_ii = GenNumber(e, cii);
  // c = 0 asks for some eps-independent constant: the ratio may not decay
  if (pc.cond_ii && cand.c == 0) {
    double v = fitted(pc.c_ii, o.classify);
    if (v > o.tol) {
      pc.cond_ii = false;
      pc.failed = "ii";
      pc.witness = "lower constant decays like eps^" + std::to_string(v);
    }
  }

  // (iii)
  pc.cond_iii = true;
  pc.iii_exponent = kInfExponent;
  if (pc.cond_ii) {
    for (int s = 0; s <= o.max_order; ++s)
      for (auto& al : multi_indices(n, s)) {
        if (abs_index(al) != s) continue;
        if (!P.is_differential() && s > 0) continue;
        if (P.is_differential() && s > m) continue;
        for (int t = 0; t + s <= o.max_order; ++t)
          for (auto& be : multi_indices(n, t)) {
            if (abs_index(be) != t || s + t == 0) continue;
            std::vector<cplx> c(K);
            for (size_t k = 0; k < K; ++k) {
              auto D = P.derivative_table(g, k, al, be);
              double mx = 0;
              for (size_t mm = 0; mm < M; ++mm) {
                if (radius(g, mm) < cand.R) continue;
                double w = bracket_pow(g, mm, s);
                for (size_t j = 0; j < M; ++j) mx = std::max(mx, std::abs(D(j, mm)) * w / std::abs(T0[k](j, mm)));
              }
              c[k] = mx;
            }
            double v = fitted(GenNumber(e, c), o.classify);
            pc.iii_exponent = std::min(pc.iii_exponent, v);
            if (v < -o.tol && pc.cond_iii) {
              pc.cond_iii = false;
              if (pc.failed.empty()) {
                pc.failed = "iii";
                pc.witness = "alpha=" + index_str(al, n) + " beta=" + index_str(be, n) + " exponent " + std::to_string(v);
              }
            }
          }
      }
  } else {
    pc.cond_iii = false;
  }
  pc.pass = pc.cond_i && pc.cond_ii && pc.cond_iii;
  return pc;
}

EllipticNearPoint elliptic_near_point(const VarSymbol& P, const TorusGrid& g, const Point& x0, double r,
                                      const ProfileOptions& o) {
  if (!P.is_differential()) fail(ErrorKind::InvalidArgument, "ellipticity near a point needs a differential symbol");
  const EpsGrid& e = P.eps();
  const size_t K = e.size(), M = g.size();
  const int m = static_cast<int>(P.order());
  auto mask = ball_mask(g, x0, r);
  auto dirs = unit_directions(g.n, g.n == 1 ? 2 : 720);
  EllipticNearPoint ep;
  std::vector<cplx> c0(K);
  ep.R_eps.assign(K, 0);
  const double rmax = max_radius(g);
  for (size_t k = 0; k < K; ++k) {
    std::vector<GridField> cf;
    std::vector<MultiIndex> al;
    for (auto& [a, c] : P.coeffs())
      if (abs_index(a) == m) {
        al.push_back(a);
        cf.push_back(c.on_grid(g, e, k));
      }
    double mn = kInfExponent;
    for (size_t j = 0; j < M; ++j) {
      if (!mask[j]) continue;
      for (auto& w : dirs) {
        cplx s = 0;
        for (size_t i = 0; i < al.size(); ++i) {
          double p = 1;
          for (int d = 0; d < 3; ++d)
            for (int q = 0; q < al[i][d]; ++q) p *= w[d];
          s += cf[i][j] * p;
        }
        mn = std::min(mn, std::abs(s));
      }
    }
    c0[k] = mn;
    auto T = P.table(g, k);
    double Rk = 0;
    for (size_t mm = 0; mm < M; ++mm) {
      double bound = mn / 4 * bracket_pow(g, mm, m);
      for (size_t j = 0; j < M; ++j)
        if (mask[j] && std::abs(T(j, mm)) < bound) Rk = std::max(Rk, radius(g, mm) * 1.01 + 1e-9);
    }
    if (Rk >= rmax) {
      Rk = rmax;
      ep.capped = true;
    }
    ep.R_eps[k] = Rk;
  }
  ep.c0 = GenNumber(e, c0);
  ep.a = fitted(ep.c0, o.classify);
  HypoProfile prof;
  prof.a = prof.a_prime = std::isfinite(ep.a) ? ep.a : 0;
  prof.m_prime = m;
  prof.R = *std::max_element(ep.R_eps.begin(), ep.R_eps.end());
  prof.c = 0;
  ep.check = check_profile(P, g, prof, o);
  ep.check.via_elliptic = true;
  return ep;
}

ParametrixTerms parametrix_terms(const VarSymbol& P, const TorusGrid& g, const HypoProfile& prof, int J, Exec exec) {
  ProfileCheck pc = check_profile(P, g, prof);
  if (!pc.pass) fail(ErrorKind::ProfileFails, "condition (" + pc.failed + ") fails: " + pc.witness);
  if (!P.is_differential()) fail(ErrorKind::InvalidArgument, "the recursion needs xi-derivatives of P");
  const EpsGrid& e = P.eps();
  const size_t K = e.size(), M = g.size();
  const int n = g.n;
  ParametrixTerms t;
  t.grid = g;
  t.eps = e;
  t.profile = prof;
  t.q.assign(J, std::vector<Eigen::MatrixXcd>(K));
  t.telescoping.assign(J, std::vector<double>(K, 0));
  t.weighted_sup.assign(J, std::vector<double>(K, 0));
  std::vector<std::vector<double>> slope(J, std::vector<double>(K, -kInfExponent));
  std::vector<char> zero(K, 0);

  std::vector<MultiIndex> gams;
  for (int s = 0; s < J; ++s)
    for (auto& a : multi_indices(n, s))
      if (abs_index(a) == s) gams.push_back(a);

  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    std::map<MultiIndex, Eigen::MatrixXcd> dP;
    for (auto& ga : gams) dP[ga] = P.derivative_table(g, k, ga, {0, 0, 0});
    const Eigen::MatrixXcd& T0 = dP[{0, 0, 0}];
    Eigen::MatrixXcd q0 = Eigen::MatrixXcd::Zero(M, M);
    for (size_t m = 0; m < M; ++m) {
      double psi = excision(radius(g, m), prof.R);
      if (psi == 0) continue;
      for (size_t j = 0; j < M; ++j) {
        if (T0(j, m) == 0.0) {
          zero[k] = 1;
          continue;
        }
        q0(j, m) = psi / T0(j, m);
      }
    }
    t.q[0][k] = q0;
    // xderivs[l][gamma] = d_x^gamma q_l
    std::vector<std::map<MultiIndex, Eigen::MatrixXcd>> dq(J);
    auto dxq = [&](int l, const MultiIndex& ga) -> const Eigen::MatrixXcd& {
      auto it = dq[l].find(ga);
      if (it == dq[l].end()) it = dq[l].emplace(ga, xderiv(g, t.q[l][k], ga)).first;
      return it->second;
    };
    auto coef = [&](const MultiIndex& ga) {
      int s = abs_index(ga);
      cplx mi = std::pow(cplx(0, -1), s);
      return mi / factorial(ga);
    };
    auto on_far = [&](size_t m) { return radius(g, m) >= 2 * prof.R; };
    for (int j = 1; j < J; ++j) {
      Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(M, M);
      double scale = 0;
      for (int l = 0; l < j; ++l)
        for (auto& ga : gams) {
          if (abs_index(ga) + l != j) continue;
          Eigen::MatrixXcd term = coef(ga) * dP[ga].cwiseProduct(dxq(l, ga));
          S += term;
          for (size_t m = 0; m < M; ++m)
            if (on_far(m)) scale = std::max(scale, term.col(m).cwiseAbs().maxCoeff());
        }
      t.q[j][k] = -S.cwiseProduct(q0);
      Eigen::MatrixXcd full = S + T0.cwiseProduct(t.q[j][k]);
      double defect = 0;
      for (size_t m = 0; m < M; ++m)
        if (on_far(m)) defect = std::max(defect, full.col(m).cwiseAbs().maxCoeff());
      t.telescoping[j][k] = scale > 0 ? defect / scale : defect;
    }
    for (int j = 0; j < J; ++j) {
      double ws = 0;
      std::vector<double> x, y;
      for (size_t m = 0; m < M; ++m) {
        double mx = t.q[j][k].col(m).cwiseAbs().maxCoeff();
        ws = std::max(ws, mx * bracket_pow(g, m, prof.m_prime + j));
        if (on_far(m) && mx > 0 && radius(g, m) > 0) {
          x.push_back(std::log(japanese(radius(g, m))));
          y.push_back(std::log(mx));
        }
      }
      t.weighted_sup[j][k] = ws;
      if (x.size() >= 2) slope[j][k] = fit_line(x, y).slope;
    }
  }
  for (size_t k = 0; k < K; ++k)
    if (zero[k]) fail(ErrorKind::ProfileFails, "symbol vanishes outside the excision at eps = " + eps_str(e[k]));
  t.decay.assign(J, 0);
  for (int j = 0; j < J; ++j) t.decay[j] = *std::max_element(slope[j].begin(), slope[j].end());
  return t;
}

AsymptoticSum asymptotic_sum(const ParametrixTerms& t) {
  const TorusGrid& g = t.grid;
  const size_t K = t.eps.size(), M = g.size();
  const int J = static_cast<int>(t.q.size());
  const double rmax = max_radius(g);
  AsymptoticSum s;
  s.q.resize(K);
  for (size_t k = 0; k < K; ++k) s.q[k] = t.q[0][k];
  s.R.push_back(t.profile.R);
  s.contribution.push_back(0);
  s.dropped.push_back(0);
  for (int j = 1; j < J; ++j) {
    const double w0 = t.profile.m_prime + j - 1;
    auto contribution = [&](double R) {
      double c = 0;
      for (size_t k = 0; k < K; ++k)
        for (size_t m = 0; m < M; ++m) {
          double chi = excision(radius(g, m), R);
          if (chi == 0) continue;
          c = std::max(c, chi * t.q[j][k].col(m).cwiseAbs().maxCoeff() * bracket_pow(g, m, w0));
        }
      return c;
    };
    double R = t.profile.R > 0 ? t.profile.R : 0;
    double c = contribution(R);
    while (c >= std::ldexp(1.0, -j) && R <= rmax) {
      R = R > 0 ? 2 * R : g.dxi() / 2;
      c = contribution(R);
    }
    bool drop = R > rmax;
    s.R.push_back(R);
    s.contribution.push_back(drop ? 0 : c);
    s.dropped.push_back(drop);
    if (drop) continue;
    for (size_t k = 0; k < K; ++k)
      for (size_t m = 0; m < M; ++m) {
        double chi = excision(radius(g, m), R);
        if (chi != 0) s.q[k].col(m) += chi * t.q[j][k].col(m);
      }
  }
  return s;
}

RemainderReport compose_remainder(const VarSymbol& P, const TorusGrid& g, const AsymptoticSum& q, Exec exec) {
  const EpsGrid& e = P.eps();
  const size_t K = e.size(), M = g.size();
  const int n = g.n;
  RemainderReport rr;
  rr.r.resize(K);
  rr.sup_l1.assign(K, 0);
  rr.sup_l3.assign(K, 0);
  rr.kernel_sup.assign(K, 0);
  std::vector<double> growth(K, 0);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    Eigen::MatrixXcd R(M, M);
    GridField col(g);
    for (size_t m = 0; m < M; ++m) {
      for (size_t j = 0; j < M; ++j) col[j] = q.q[k](j, m);
      GridField pv = P.apply(g, k, col, g.freq(m));
      for (size_t j = 0; j < M; ++j) R(j, m) = pv[j] - 1.0;
    }
    std::vector<double> colmax(M);
    for (size_t m = 0; m < M; ++m) {
      colmax[m] = R.col(m).cwiseAbs().maxCoeff();
      rr.sup_l1[k] = std::max(rr.sup_l1[k], colmax[m] * bracket_pow(g, m, n + 1));
      rr.sup_l3[k] = std::max(rr.sup_l3[k], colmax[m] * bracket_pow(g, m, n + 3));
    }
    growth[k] = shell_growth(g, [&](size_t m) { return colmax[m] * bracket_pow(g, m, n + 1); });
    // kernel rows: k(x_j, .) = L^{-n} sum_m r(x_j, xi_m) exp(i xi_m (x_j - .))
    double ks = 0;
    for (size_t j = 0; j < M; ++j) {
      std::vector<cplx> w(M);
      Point xj = g.node(j);
      for (size_t m = 0; m < M; ++m) {
        Point xi = g.freq(m);
        w[m] = R(j, m) * std::polar(1.0, xi[0] * xj[0] + xi[1] * xj[1] + xi[2] * xj[2]);
      }
      GridField row = from_spectrum(g, w);
      for (auto& z : row.v) ks = std::max(ks, std::abs(z));
    }
    rr.kernel_sup[k] = ks;
    rr.r[k] = std::move(R);
  }
  rr.xi_growth = *std::max_element(growth.begin(), growth.end());
  std::vector<cplx> l1(rr.sup_l1.begin(), rr.sup_l1.end()), ke(rr.kernel_sup.begin(), rr.kernel_sup.end());
  rr.l1_class = classify(GenNumber(e, l1));
  rr.kernel_class = classify(GenNumber(e, ke));
  rr.smoothing = rr.xi_growth <= 0.3;
  double ex = rr.l1_class.all_zero ? kInfExponent : rr.l1_class.fitted_exponent;
  rr.bounded = ex >= -0.1;
  if (!rr.smoothing)
    fail(ErrorKind::RemainderNotSmoothing,
         "weighted remainder grows with the lattice radius (slope " + std::to_string(rr.xi_growth) + ")");
  return rr;
}

LeftRemainder left_remainder(const VarSymbol& P, const TorusGrid& g, const AsymptoticSum& q) {
  const EpsGrid& e = P.eps();
  const size_t K = e.size(), M = g.size();
  LeftRemainder lr;
  lr.sup.assign(K, 0);
  for (size_t k = 0; k < K; ++k) {
    DenseOp Q(g, q.q[k]);
    for (size_t m = 0; m < M; ++m) {
      Point xi = g.freq(m);
      GridField em = GridField::from_function(
          g, [&](const Point& x) { return std::polar(1.0, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2]); });
      GridField s = Q.apply(P.apply(g, k, em));
      double mx = 0;
      for (size_t j = 0; j < M; ++j) mx = std::max(mx, std::abs(s[j] * std::conj(em[j]) - 1.0));
      lr.sup[k] = std::max(lr.sup[k], mx * bracket_pow(g, m, g.n + 1));
    }
  }
  std::vector<cplx> v(lr.sup.begin(), lr.sup.end());
  lr.cls = classify(GenNumber(e, v));
  return lr;
}

namespace {

struct LocalOp {
  const VarSymbol& P;
  const TorusGrid& g;
  size_t k;
  DenseOp Q;
  const GridField& phi;
  Exec exec;
  // g -> (P q - I)(phi g)
  GridField apply(const GridField& v) const {
    GridField pv = pointwise(phi, v);
    return P.apply(g, k, Q.apply(pv, exec)) - pv;
  }
  GridField adjoint(const GridField& y) const {
    GridField t = Q.adjoint(P.apply_adjoint(g, k, y), exec) - y;
    return pointwise(phi, t);
  }
};

double power_norm(const LocalOp& A, int steps, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  GridField x(A.g);
  for (auto& z : x.v) z = cplx(nd(rng), nd(rng));
  double best = 0;
  for (int it = 0; it < steps; ++it) {
    double xn = l2_norm(x);
    if (xn == 0) break;
    x *= 1.0 / xn;
    GridField y = A.apply(x);
    best = std::max(best, l2_norm(y));
    x = A.adjoint(y);
  }
  return best;
}

}  // namespace

ParametrixSolveReport solve_via_parametrix(const VarSymbol& P, const TorusGrid& g, const AsymptoticSum& q,
                                           const NetField& F, const Point& x0, const ParametrixSolveOptions& o) {
  if (F.grid != g) fail(ErrorKind::GridMismatch, "right-hand side lives on another grid");
  const EpsGrid& e = P.eps();
  require_same_grid(F.eps, e);
  const size_t K = e.size(), t0 = e.tail_begin(), T = K - t0;
  // a ball of radius h still holds three nodes
  const double floor = std::max(g.L / 1024, g.h());
  ParametrixSolveReport rep;
  rep.eps1 = e[t0];
  std::vector<double> fac(T);
  const bool par = o.exec == Exec::Parallel;

  bool ok = false;
  GridField phi;
  for (double delta = o.delta0; delta >= floor * (1 - 1e-12); delta /= 2) {
    phi = cutoff(g, x0, delta);
    rep.ladder.push_back(delta);
#pragma omp parallel for schedule(dynamic) if (par)
    for (long ii = 0; ii < static_cast<long>(T); ++ii) {
      size_t k = t0 + static_cast<size_t>(ii);
      LocalOp A{P, g, k, DenseOp(g, q.q[k]), phi, Exec::Serial};
      fac[ii] = power_norm(A, o.power_steps, o.seed + static_cast<unsigned>(k));
    }
    if (*std::max_element(fac.begin(), fac.end()) <= 0.5) {
      rep.delta = delta;
      ok = true;
      break;
    }
  }
  if (!ok) fail(ErrorKind::NoContraction, "remainder does not localise below 1/2");

  const auto mask = ball_mask(g, x0, rep.delta);
  rep.solution = NetField(g, e);
  rep.eps.assign(T, 0);
  rep.contraction = fac;
  rep.residual.assign(T, 0);
  rep.max_ratio.assign(T, 0);
  rep.iterations.assign(T, 0);
  std::vector<char> failed(T, 0);
#pragma omp parallel for schedule(dynamic) if (par)
  for (long ii = 0; ii < static_cast<long>(T); ++ii) {
    size_t i = static_cast<size_t>(ii), k = t0 + i;
    LocalOp A{P, g, k, DenseOp(g, q.q[k]), phi, Exec::Serial};
    GridField rhs = pointwise(phi, F.f[k]);
    GridField w = rhs;
    double w0 = l2_norm(rhs), prev = -1, worst = 0;
    int it = 0;
    bool conv = w0 == 0;
    while (!conv && it < o.max_iter) {
      GridField next = rhs - A.apply(w);
      double d = l2_norm(next - w);
      ++it;
      if (prev > 0 && d > 1e3 * o.tol * w0) worst = std::max(worst, d / prev);
      prev = d;
      w = std::move(next);
      if (d <= o.tol * w0) conv = true;
      if (!std::isfinite(d) || d > 1e8 * w0) break;
    }
    failed[i] = !conv;
    GridField Tk = A.Q.apply(pointwise(phi, w), Exec::Serial);
    GridField res = P.apply(g, k, Tk) - F.f[k];
    double fn = l2_norm_on(F.f[k], mask);
    rep.eps[i] = e[k];
    rep.iterations[i] = it;
    rep.max_ratio[i] = worst;
    rep.residual[i] = fn > 0 ? l2_norm_on(res, mask) / fn : l2_norm_on(res, mask);
    rep.solution.f[k] = std::move(Tk);
  }
  for (size_t i = 0; i < T; ++i) {
    if (failed[i]) fail(ErrorKind::Diverged, "Neumann iteration stalled at eps = " + eps_str(rep.eps[i]));
    rep.accepted.push_back(t0 + i);
  }
  EpsGrid tail(rep.eps);
  rep.regular = true;
  for (int s = 0; s <= 2; ++s)
    for (auto& be : multi_indices(g.n, s)) {
      if (abs_index(be) != s) continue;
      std::vector<cplx> v(T);
      for (size_t i = 0; i < T; ++i) v[i] = l2_norm_on(spectral_derivative(rep.solution.f[t0 + i], be), mask);
      rep.derivative_classes.push_back(classify(GenNumber(tail, v)));
      rep.regular &= rep.derivative_classes.back().moderate();
    }
  return rep;
}

}  // namespace gcs
