#include "gcs/bptype.hpp"

#include <algorithm>
#include <random>

namespace gcs {

void BPOperator::validate() const {
  const EpsGrid& e = eps();
  for (auto& t : terms) {
    if (t.P.dim() != dim()) fail(ErrorKind::DimensionMismatch, "perturbation symbol has another dimension");
    require_same_grid(t.P.grid(), e);
    for (size_t k = 0; k < e.size(); ++k) {
      cplx v = t.c.at(x0, e, k);
      if (std::abs(v) > 1e-12)
        fail(ErrorKind::InvalidArgument, "coefficient " + t.name + " does not vanish at x0 (eps = " +
                                             std::to_string(e[k]) + ")");
    }
  }
}

GridField BPOperator::apply(size_t k, const GridField& u, const Point& theta) const {
  GridField r = apply_symbol(P0, k, u, theta);
  for (auto& t : terms) {
    if (t.c.is_zero()) continue;
    GridField c = t.c.on_grid(u.grid, eps(), k);
    GridField w = apply_symbol(t.P, k, u, theta);
    for (size_t j = 0; j < r.size(); ++j) r[j] += c[j] * w[j];
  }
  return r;
}

Decomposition decompose_at_point(int dim, const EpsGrid& eps, const std::map<MultiIndex, CoeffField>& coeffs,
                                 const Point& x0, bool attach_h3) {
  ConstSymbol P0(dim, eps);
  std::vector<BPTerm> terms;
  for (auto& [al, c] : coeffs) {
    P0.add_term(al, c.value_at(x0, eps));
    if (!c.depends_on_x()) continue;
    terms.push_back({c.centered(x0), ConstSymbol::monomial(dim, al, GenNumber::constant(eps, 1.0)),
                     "D^" + index_str(al, dim)});
  }
  Decomposition d{BPOperator(P0, x0), false, {}};
  d.op.terms = std::move(terms);
  if (attach_h3 && P0.effective_order() > 0) {
    d.elliptic = is_g_elliptic(P0).verdict;
    if (d.elliptic)
      for (auto& t : d.op.terms) d.h3.push_back(is_stronger(t.P, P0));
  }
  return d;
}

BPOperator decompose_2d_second_order(const SecondOrder2D& in, const Point& x0) {
  const EpsGrid& e = in.c20.grid();
  require_same_grid(e, in.c11.grid());
  require_same_grid(e, in.c02.grid());
  bool some = false;
  for (const GenNumber* g : {&in.c20, &in.c02, &in.c11}) {
    try {
      invert(*g);
      some = true;
    } catch (const Error&) {
    }
  }
  if (!some) fail(ErrorKind::NotInvertible, "no principal coefficient is invertible");
  GenNumber det = GenNumber::constant(e, 4.0) * in.c20 * in.c02 - in.c11 * in.c11;
  GenNumber D3 = GenNumber::constant(e, 2.0) * (in.c20 + in.c02) + in.c11;
  GenNumber idet, iD3;
  try {
    idet = invert(det);
  } catch (const Error&) {
    fail(ErrorKind::NotInvertible, "4 c20 c02 - c11^2 is not invertible");
  }
  try {
    iD3 = invert(D3);
  } catch (const Error&) {
    fail(ErrorKind::NotInvertible, "2 c20 + 2 c02 + c11 is not invertible");
  }
  GenNumber a10 = in.c10.value_at(x0, e), a01 = in.c01.value_at(x0, e), a00 = in.c00.value_at(x0, e);

  ConstSymbol P0(2, e);
  P0.add_term({2, 0, 0}, in.c20);
  P0.add_term({1, 1, 0}, in.c11);
  P0.add_term({0, 2, 0}, in.c02);
  P0.add_term({1, 0, 0}, a10);
  P0.add_term({0, 1, 0}, a01);
  P0.add_term({0, 0, 0}, a00);

  const GenNumber two = GenNumber::constant(e, 2.0);
  GenNumber k1_10 = two * in.c02 * idet, k1_01 = -(in.c11 * idet);
  GenNumber k2_10 = -(in.c11 * idet), k2_01 = two * in.c20 * idet;
  GenNumber k3_00 = iD3;
  GenNumber k3_10 = -((a10 * k1_10 + a01 * k2_10) * iD3);
  GenNumber k3_01 = -((a10 * k1_01 + a01 * k2_01) * iD3);

  BPOperator bp(P0, x0);
  bp.terms.push_back({CoeffField::affine({{k1_10, in.c10}, {k1_01, in.c01}}, x0), P0.derive({1, 0, 0}), "c1"});
  bp.terms.push_back({CoeffField::affine({{k2_10, in.c10}, {k2_01, in.c01}}, x0), P0.derive({0, 1, 0}), "c2"});
  bp.terms.push_back({CoeffField::affine({{k3_00, in.c00}, {k3_10, in.c10}, {k3_01, in.c01}}, x0),
                      P0.derive({2, 0, 0}) + P0.derive({1, 1, 0}) + P0.derive({0, 2, 0}), "c3"});
  bp.validate();
  return bp;
}

BPOperator decompose_2d_second_order(int dim, const EpsGrid& eps, const std::map<MultiIndex, CoeffField>& coeffs,
                                     const Point& x0) {
  if (dim != 2) fail(ErrorKind::WrongShape, "decomposition needs a 2D operator");
  SecondOrder2D in{GenNumber::constant(eps, 0.0), GenNumber::constant(eps, 0.0), GenNumber::constant(eps, 0.0),
                   CoeffField(), CoeffField(), CoeffField()};
  for (auto& [al, c] : coeffs) {
    int s = abs_index(al);
    if (s > 2) fail(ErrorKind::WrongShape, "decomposition needs order <= 2");
    if (s == 2) {
      if (c.depends_on_x()) fail(ErrorKind::WrongShape, "principal coefficients must be constant");
      GenNumber v = c.value_at(x0, eps);
      if (al[0] == 2) in.c20 = v;
      else if (al[1] == 2) in.c02 = v;
      else in.c11 = v;
    } else if (s == 1) {
      (al[0] == 1 ? in.c10 : in.c01) = c;
    } else {
      in.c00 = c;
    }
  }
  return decompose_2d_second_order(in, x0);
}

HypothesisReport check_hypotheses(const BPOperator& bp, const TorusGrid& g, const HypothesisOptions& o) {
  HypothesisReport r;
  const EpsGrid& e = bp.eps();
  const int n = bp.dim();
  try {
    bp.validate();
    r.h1 = true;
  } catch (const Error&) {
    r.h1 = false;
  }
  std::vector<Point> pts{{0, 0, 0}};
  for (int d = 0; d < n; ++d) {
    Point p{0, 0, 0};
    p[d] = 1;
    pts.push_back(p);
  }
  for (auto& p : pts)
    if (weight_invertible_at(bp.P0, p).report.strictly_nonzero) {
      r.h2 = true;
      r.h2_point = p;
      break;
    }

  r.h5_order = static_cast<int>(std::ceil(n + 1 + (n + 1) / o.p + o.N - 1e-12));
  int h6_order = static_cast<int>(std::ceil(n + 1 + (n + 1) / o.p + o.h6_max_N - 1e-12));
  r.h3 = r.h4 = r.h5 = r.h6 = true;
  for (auto& t : bp.terms) {
    TermHypothesis th;
    th.name = t.name;
    ComparisonReport cr = is_stronger(t.P, bp.P0);
    th.lambda = cr.lambda;
    th.h3 = cr.verdict;
    th.lambda_valuation = cr.lambda_class.fitted_exponent;
    auto db = t.c.derivative_bounds(g, e, bp.x0, bp.radius, h6_order);
    auto upto = [&](int K) {
      std::vector<cplx> v(e.size(), 0.0);
      for (int l = 0; l <= K; ++l)
        for (size_t k = 0; k < e.size(); ++k) v[k] = std::max(v[k].real(), db[l][k]);
      return GenNumber(e, v);
    };
    th.deriv_bound = upto(r.h5_order);
    th.product_valuation = valuation(th.deriv_bound * th.lambda);
    for (int N = 0; N <= o.h6_max_N; ++N) {
      int K = static_cast<int>(std::ceil(n + 1 + (n + 1) / o.p + N - 1e-12));
      th.h6_valuations.push_back(valuation(upto(K) * th.lambda));
    }
    r.h3 &= th.h3;
    r.h4 &= th.lambda_valuation >= -o.tol;
    r.h5 &= th.product_valuation >= -o.tol;
    for (double v : th.h6_valuations) r.h6 &= v > o.tol;
    r.terms.push_back(std::move(th));
  }
  return r;
}

ContractionOp::ContractionOp(const BPOperator& bp, const FundamentalSolution& E, size_t k, double delta,
                             const SolverOptions& o)
    : g_(E.grid) {
  const Point& th = E.theta;
  auto s0 = symbol_table(bp.P0, g_, k, th);
  auto w0 = weight_table(bp.P0, g_, k, th);
  if (o.f0 == F0Kind::Periodic) {
    F0hat_.resize(s0.size());
    for (size_t j = 0; j < s0.size(); ++j) F0hat_[j] = 1.0 / s0[j];
  } else {
    GridField chi = cutoff(g_, {0, 0, 0}, 2 * o.delta0);
    F0hat_ = spectrum(pointwise(chi, E.E.f[k]));
  }
  for (size_t j = 0; j < w0.size(); ++j) C1_ = std::max(C1_, w0[j] * std::abs(F0hat_[j]));

  GridField psi = cutoff(g_, bp.x0, delta);
  if (o.cutoff_squared) {
    GridField p0 = cutoff(g_, bp.x0, o.delta0);
    psi = pointwise(psi, pointwise(p0, p0));
  }
  for (auto& t : bp.terms) {
    Pj_.push_back(symbol_table(t.P, g_, k, th));
    GridField c = t.c.is_zero() ? GridField(g_) : t.c.on_grid(g_, bp.eps(), k);
    GridField m = pointwise(psi, c);
    for (auto& z : m.v) zero_ &= (z == 0.0);
    mult_.push_back(std::move(m));
    auto wj = weight_table(t.P, g_, k, th);
    double l = 0;
    for (size_t j = 0; j < wj.size(); ++j) l = std::max(l, wj[j] / w0[j]);
    lam_.push_back(l);
  }
}

GridField ContractionOp::convolve_F0(const GridField& g) const { return multiply_spectrum(g, F0hat_); }

GridField ContractionOp::apply(const GridField& g) const {
  GridField acc(g_);
  if (zero_) return acc;
  auto w = spectrum(g);
  for (size_t j = 0; j < w.size(); ++j) w[j] *= F0hat_[j];
  std::vector<cplx> t(w.size());
  for (size_t i = 0; i < mult_.size(); ++i) {
    for (size_t j = 0; j < w.size(); ++j) t[j] = Pj_[i][j] * w[j];
    GridField u = from_spectrum(g_, t);
    for (size_t j = 0; j < u.size(); ++j) acc[j] += mult_[i][j] * u[j];
  }
  return acc;
}

GridField ContractionOp::adjoint(const GridField& v) const {
  std::vector<cplx> acc(g_.size(), 0.0);
  if (zero_) return GridField(g_);
  GridField u(g_);
  for (size_t i = 0; i < mult_.size(); ++i) {
    for (size_t j = 0; j < u.size(); ++j) u[j] = std::conj(mult_[i][j]) * v[j];
    auto w = spectrum(u);
    for (size_t j = 0; j < w.size(); ++j) acc[j] += std::conj(Pj_[i][j]) * w[j];
  }
  for (size_t j = 0; j < acc.size(); ++j) acc[j] *= std::conj(F0hat_[j]);
  return from_spectrum(g_, acc);
}

double ContractionOp::power_norm(const std::vector<double>& w, int steps, unsigned seed) const {
  if (zero_) return 0.0;
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> x(g_.size());
  auto nrm = [](const std::vector<cplx>& a) {
    double s = 0;
    for (auto& z : a) s += std::norm(z);
    return std::sqrt(s);
  };
  for (auto& z : x) z = cplx(nd(rng), nd(rng));
  double best = 0;
  for (int it = 0; it < steps; ++it) {
    double xn = nrm(x);
    for (auto& z : x) z /= xn;
    std::vector<cplx> t(x.size());
    for (size_t j = 0; j < x.size(); ++j) t[j] = x[j] / w[j];
    auto y = spectrum(apply(from_spectrum(g_, t)));
    for (size_t j = 0; j < y.size(); ++j) y[j] *= w[j];
    best = std::max(best, nrm(y));
    for (size_t j = 0; j < y.size(); ++j) t[j] = y[j] * w[j];
    auto z = spectrum(adjoint(from_spectrum(g_, t)));
    for (size_t j = 0; j < z.size(); ++j) z[j] /= w[j];
    if (nrm(z) == 0) break;
    x = std::move(z);
  }
  return best;
}

double ContractionOp::analytic_bound(const WeightFn& k) const {
  if (zero_) return 0.0;
  WeightFn M = m_k(k, g_);
  double s = 0;
  for (size_t i = 0; i < mult_.size(); ++i) s += bpk_norm(mult_[i], 1.0, M) * lam_[i];
  return 2 * C1_ * s;
}

FundamentalSolution f0_for(const BPOperator& bp, const TorusGrid& g, Exec exec) {
  return fundamental_solution(bp.P0, g, exec);
}

namespace {

struct FactorEval {
  double power = 0, bound = 0, C1 = 0;
  double factor() const { return std::max(power, bound); }
};

// weight tables for the k_nu norm and the constant C_nu = max k_nu / k on the lattice
struct NuWeights {
  std::vector<double> knu;
  double Cnu = 1;
  WeightFn k;
};

NuWeights nu_weights(const TorusGrid& g, const Point& theta, double s, double nu) {
  NuWeights w;
  w.k = WeightFn::japanese(s);
  WeightFn kn = k_nu(w.k, nu, g);
  w.knu = tabulate(kn, g, theta);
  auto base = tabulate(w.k, g, theta);
  for (size_t j = 0; j < base.size(); ++j) w.Cnu = std::max(w.Cnu, w.knu[j] / base[j]);
  return w;
}

std::vector<FactorEval> evaluate(const BPOperator& bp, const FundamentalSolution& E, double delta,
                                 const SolverOptions& o, const NuWeights& nw) {
  const size_t K = bp.eps().size();
  std::vector<FactorEval> out(K);
  const bool par = o.exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    ContractionOp A(bp, E, k, delta, o);
    out[k].power = A.power_norm(nw.knu, o.power_steps, o.seed + static_cast<unsigned>(k));
    out[k].bound = nw.Cnu * A.analytic_bound(nw.k);
    out[k].C1 = A.C1();
  }
  return out;
}

}  // namespace

DeltaSearch find_delta(const BPOperator& bp, const FundamentalSolution& E, const TorusGrid& g,
                       const SolverOptions& o) {
  bp.validate();
  if (2 * o.delta0 >= g.L / 2) fail(ErrorKind::DeltaTooLarge, "delta0 does not fit the torus");
  if (o.f0 == F0Kind::Truncated && 4 * o.delta0 >= g.L / 2)
    fail(ErrorKind::DeltaTooLarge, "truncation of F0 at 4*delta0 does not fit the torus");
  const EpsGrid& e = bp.eps();
  const size_t K = e.size(), t0 = e.tail_begin();
  const double floor = std::max(g.L / 1024, 2 * g.h());
  NuWeights nw = nu_weights(g, E.theta, o.s, o.nu);

  DeltaSearch ds;
  ds.eps1 = e[t0];
  for (double delta = o.delta0; delta >= floor * (1 - 1e-12); delta /= 2) {
    auto fe = evaluate(bp, E, delta, o, nw);
    ds.ladder.push_back(delta);
    std::vector<double> pw(K), bd(K), fc(K);
    bool ok = true;
    for (size_t k = 0; k < K; ++k) {
      pw[k] = fe[k].power;
      bd[k] = fe[k].bound;
      fc[k] = fe[k].factor();
      if (k >= t0 && fc[k] > 0.5) ok = false;
    }
    ds.power.push_back(pw);
    ds.bound.push_back(bd);
    ds.factor.push_back(fc);
    if (ok) {
      ds.delta = delta;
      ds.accepted_factor = fc;
      for (size_t k = 0; k < K; ++k) ds.C1.push_back(fe[k].C1);
      ds.head_ok.resize(t0);
      for (size_t k = 0; k < t0; ++k) ds.head_ok[k] = fc[k] <= 0.5;
      if (o.k_ladder) {
        for (int s = -4; s <= 4; ++s) {
          auto f2 = evaluate(bp, E, delta, o, nu_weights(g, E.theta, s, o.nu));
          bool good = true;
          for (size_t k = t0; k < K; ++k) good &= f2[k].factor() <= 0.5;
          ds.k_ladder.emplace_back(s, good);
        }
      }
      return ds;
    }
  }
  fail(ErrorKind::NoContraction, "contraction factor stays above 1/2 down to delta = " + std::to_string(floor));
}

SolveReport solve_local(const BPOperator& bp, const FundamentalSolution& E, const NetField& F, double delta,
                        const SolverOptions& o) {
  bp.validate();
  const TorusGrid& g = E.grid;
  if (F.grid != g) fail(ErrorKind::GridMismatch, "right-hand side lives on another grid");
  const EpsGrid& e = bp.eps();
  require_same_grid(F.eps, e);
  const size_t K = e.size(), t0 = e.tail_begin();

  SolveReport rep;
  rep.delta = delta;
  rep.eps1 = e[t0];
  rep.theta = E.theta;
  rep.hypotheses = check_hypotheses(bp, g);
  rep.solution = NetField(g, e);
  const size_t M = K - t0;
  rep.eps.resize(M);
  rep.contraction.resize(M);
  rep.iterations.resize(M);
  rep.residual.resize(M);
  rep.max_ratio.resize(M);
  rep.g_norm.resize(M);
  rep.T_norm.resize(M);
  NuWeights nw = nu_weights(g, E.theta, o.s, o.nu);
  const GridField psi = cutoff(g, bp.x0, delta);
  const auto mask = ball_mask(g, bp.x0, delta);
  std::vector<int> failed(M, 0);

  const bool par = o.exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long ii = 0; ii < static_cast<long>(M); ++ii) {
    size_t i = static_cast<size_t>(ii), k = t0 + i;
    ContractionOp A(bp, E, k, delta, o);
    double factor = std::max(A.power_norm(nw.knu, o.power_steps, o.seed + static_cast<unsigned>(k)),
                             nw.Cnu * A.analytic_bound(nw.k));
    GridField f = to_twisted(F.f[k], E.theta);
    GridField rhs = pointwise(psi, f);
    GridField gk = rhs;
    double g0 = l2_norm(rhs), prev = -1, worst = 0;
    int it = 0;
    bool conv = g0 == 0;
    while (!conv && it < o.max_iter) {
      GridField next = rhs - A.apply(gk);
      double d = l2_norm(next - gk);
      ++it;
      if (prev > 0 && d > 1e3 * o.tol * g0) worst = std::max(worst, d / prev);
      prev = d;
      gk = std::move(next);
      if (d <= o.tol * g0) conv = true;
      if (!std::isfinite(d) || d > 1e8 * g0) break;
    }
    if (!conv) failed[i] = 1;
    GridField T = A.convolve_F0(gk);
    GridField r = bp.apply(k, T, E.theta) - f;
    double fn = l2_norm_on(f, mask);
    rep.eps[i] = e[k];
    rep.contraction[i] = factor;
    rep.iterations[i] = it;
    rep.residual[i] = fn > 0 ? l2_norm_on(r, mask) / fn : l2_norm_on(r, mask);
    rep.max_ratio[i] = worst;
    rep.g_norm[i] = l2_norm(gk);
    rep.T_norm[i] = l2_norm(T);
    rep.solution.f[k] = std::move(T);
  }
  for (size_t i = 0; i < M; ++i) {
    if (failed[i] && rep.contraction[i] > 0.5)
      fail(ErrorKind::NoContraction, "no contraction at eps = " + std::to_string(rep.eps[i]));
    if (failed[i]) fail(ErrorKind::Diverged, "Neumann iteration stalled at eps = " + std::to_string(rep.eps[i]));
    rep.accepted.push_back(t0 + i);
  }
  std::vector<double> ge(rep.eps.begin(), rep.eps.end());
  std::vector<cplx> gn(rep.g_norm.begin(), rep.g_norm.end()), tn(rep.T_norm.begin(), rep.T_norm.end());
  EpsGrid tail(ge);
  rep.g_class = classify(GenNumber(tail, gn));
  rep.T_class = classify(GenNumber(tail, tn));
  return rep;
}

NecessaryVerdict necessary_condition(const BPOperator& bp, const GenNumber& v_at_x0) {
  if (!classify(v_at_x0).strictly_nonzero) return NecessaryVerdict::Pass;
  if (weight_invertible_at(bp.P0, {0, 0, 0}).report.strictly_nonzero) return NecessaryVerdict::Pass;
  return NecessaryVerdict::UnsolvableWarning;
}

}  // namespace gcs
