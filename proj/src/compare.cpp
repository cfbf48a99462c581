#include "gcs/compare.hpp"

#include <algorithm>
#include <functional>

namespace gcs {

const char* status_name(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

double zero_floor(double eps) { return 1e-14 * std::pow(eps, 64); }

struct RatioScan {
  std::vector<double> sup;             // per eps
  std::vector<size_t> arg;             // per eps
  std::vector<std::vector<size_t>> top;    // per eps, best few sample indices
  std::vector<std::vector<double>> shell;  // per eps, per radius
  bool vanished = false;
  double vanish_eps = 0;
};

constexpr size_t kPolishStarts = 4;

// max over samples of weight_Q(xi,t)/weight_P(xi,t) for every eps
RatioScan scan(const ConstSymbol& Q, const ConstSymbol& P, const std::vector<Point>& xs, size_t per_shell,
               double t, Exec exec) {
  const size_t K = P.grid().size();
  RatioScan r;
  r.sup.assign(K, 0);
  r.arg.assign(K, 0);
  r.shell.assign(K, {});
  r.top.assign(K, {});
  std::vector<char> bad(K, 0);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    double floor = zero_floor(P.grid()[k]);
    size_t shells = (xs.size() - 1) / per_shell;
    std::vector<double> sh(shells, 0.0);
    std::vector<std::pair<double, size_t>> top;
    for (size_t i = 0; i < xs.size(); ++i) {
      double wp = P.weight_at(xs[i], k, t);
      if (!(wp > floor)) {
        bad[k] = 1;
        continue;
      }
      double q = Q.weight_at(xs[i], k, t) / wp;
      if (q > r.sup[k] || i == 0) {
        r.sup[k] = q;
        r.arg[k] = i;
      }
      if (i > 0) {
        size_t s = (i - 1) / per_shell;
        sh[s] = std::max(sh[s], q);
      }
      top.emplace_back(q, i);
      std::push_heap(top.begin(), top.end(), std::greater<>());
      if (top.size() > kPolishStarts) {
        std::pop_heap(top.begin(), top.end(), std::greater<>());
        top.pop_back();
      }
    }
    std::sort(top.begin(), top.end(), std::greater<>());
    for (auto& [q, i] : top) r.top[k].push_back(i);
    r.shell[k] = std::move(sh);
  }
  for (size_t k = 0; k < K; ++k)
    if (bad[k]) {
      r.vanished = true;
      r.vanish_eps = P.grid()[k];
      break;
    }
  return r;
}

// Sharp ratio peaks (near zeros of P off the sample shells) are climbed by a
// compass search started from the best samples.
void polish(const ConstSymbol& Q, const ConstSymbol& P, const std::vector<Point>& xs, double t, Exec exec,
            RatioScan& r, std::vector<Point>& best) {
  const size_t K = P.grid().size();
  const int n = P.dim();
  best.assign(K, Point{0, 0, 0});
  double rmax = 0;  // stay inside the sampled window
  for (auto& x : xs) rmax = std::max(rmax, norm(x, n));
  // axis and diagonal moves
  std::vector<Point> moves;
  for (int a = 0; a < n; ++a)
    for (double sa : {1.0, -1.0}) {
      Point u{0, 0, 0};
      u[a] = sa;
      moves.push_back(u);
      for (int b = a + 1; b < n; ++b)
        for (double sb : {1.0, -1.0}) {
          Point v = u;
          v[b] = sb;
          moves.push_back(v);
        }
    }
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (long kk = 0; kk < static_cast<long>(K); ++kk) {
    size_t k = static_cast<size_t>(kk);
    double floor = zero_floor(P.grid()[k]);
    auto ratio = [&](const Point& xi) {
      double wp = P.weight_at(xi, k, t);
      return wp > floor ? Q.weight_at(xi, k, t) / wp : 0.0;
    };
    best[k] = xs[r.arg[k]];
    for (size_t i : r.top[k]) {
      Point x = xs[i];
      double q = ratio(x);
      double step = 0.25 * std::max(1.0, norm(x, n));
      for (int it = 0; it < 3000 && step > 1e-9 * std::max(1.0, norm(x, n)); ++it) {
        bool moved = false;
        for (const Point& u : moves) {
          Point y{x[0] + step * u[0], x[1] + step * u[1], x[2] + step * u[2]};
          if (norm(y, n) > rmax) continue;
          double qy = ratio(y);
          if (qy > q) {
            x = y, q = qy, moved = true;
            break;
          }
        }
        // expand after a success so long ridges are followed quickly
        step *= moved ? 1.5 : 0.5;
      }
      if (q > r.sup[k]) {
        r.sup[k] = q;
        best[k] = x;
      }
    }
  }
}

double growth_slope(const std::vector<double>& shell, const SampleOptions& so) {
  // slope over the outer two decades, log10-log10
  size_t S = shell.size();
  if (S < 2) return 0;
  const int q = std::max(1, so.per_decade);
  size_t from = S >= size_t(2 * q + 1) ? S - 2 * q - 1 : 0;
  std::vector<double> x, y;
  for (size_t s = from; s < S; ++s) {
    if (shell[s] <= 0) continue;
    x.push_back(so.min_decade + static_cast<double>(s) / q);
    y.push_back(std::log10(shell[s]));
  }
  if (x.size() < 2) return 0;
  return fit_line(x, y).slope;
}

void check_dims(const ConstSymbol& Q, const ConstSymbol& P) {
  if (Q.dim() != P.dim()) fail(ErrorKind::DimensionMismatch, "symbols have different dimensions");
  require_same_grid(Q.grid(), P.grid());
}

}  // namespace

ComparisonReport is_stronger(const ConstSymbol& Q, const ConstSymbol& P, const CompareOptions& o) {
  check_dims(Q, P);
  const int n = P.dim();
  SampleOptions so = o.samples;
  size_t per = unit_directions(n, so.directions).size();
  ComparisonReport r;
  std::vector<Point> xs;
  RatioScan s;
  // A ratio that still rises at the outer shells may only be saturating late (e.g. once
  // |xi|^2 exceeds a power of 1/eps), so widen the window before calling it unbounded.
  for (;;) {
    xs = xi_samples(n, so);
    s = scan(Q, P, xs, per, 1.0, o.exec);
    if (s.vanished) fail(ErrorKind::WeightVanishes, "weight of the stronger operator vanishes at eps = " +
                                                         std::to_string(s.vanish_eps));
    r.xi_growth = 0;
    for (size_t k = 0; k < s.sup.size(); ++k)
      r.xi_growth = std::max(r.xi_growth, growth_slope(s.shell[k], so));
    if (r.xi_growth <= o.bounded_slope || so.max_decade + 2 > o.max_decade) break;
    so.max_decade += 2;
  }
  r.sample_count = xs.size();
  r.max_decade = so.max_decade;
  std::vector<Point> at;
  polish(Q, P, xs, 1.0, o.exec, s, at);
  std::vector<cplx> lam(s.sup.begin(), s.sup.end());
  r.lambda = GenNumber(P.grid(), lam);
  r.lambda_class = classify(r.lambda, o.classify);
  for (size_t k = 0; k < s.sup.size(); ++k) r.witnesses.push_back({P.grid()[k], at[k], s.sup[k]});

  const auto& c = r.lambda_class;
  bool near_edge = std::abs(c.fit_residual - o.classify.residual_tol) < 0.02 ||
                   std::abs(c.fitted_exponent + o.classify.max_order) < 0.5;
  if (r.xi_growth >= o.unbounded_slope)
    r.status = Status::Fails;
  else if (r.xi_growth > o.bounded_slope)
    r.status = Status::Indeterminate;
  else if (near_edge)
    r.status = Status::Indeterminate;
  else
    r.status = c.moderate() ? Status::Holds : Status::Fails;
  r.verdict = r.status == Status::Holds;
  return r;
}

DominationReport dominates(const ConstSymbol& Q, const ConstSymbol& P, const CompareOptions& o) {
  check_dims(Q, P);
  DominationReport d;
  d.stronger = is_stronger(Q, P, o);
  d.lambda = d.stronger.lambda;
  const int n = P.dim();
  auto xs = xi_samples(n, o.samples);
  size_t per = unit_directions(n, o.samples.directions).size();
  const size_t K = P.grid().size();

  std::vector<double> s1;
  for (int i = 0; i <= 12; ++i) {
    double t = std::ldexp(1.0, i);
    RatioScan s = scan(Q, P, xs, per, t, o.exec);
    if (s.vanished) fail(ErrorKind::WeightVanishes, "weight vanishes in the t-ladder");
    if (i == 0) s1 = s.sup;
    double c = 0, raw = 0;
    for (size_t k = 0; k < K; ++k) {
      raw = std::max(raw, s.sup[k]);
      if (s1[k] > 0) c = std::max(c, s.sup[k] / s1[k]);
    }
    d.t.push_back(t);
    d.C_of_t.push_back(c);
    d.raw_sup.push_back(raw);
  }

  // C(t) only has to tend to 0, so take the nonincreasing envelope of the ratios
  for (size_t i = d.C_of_t.size() - 1; i-- > 0;) d.C_of_t[i] = std::max(d.C_of_t[i], d.C_of_t[i + 1]);
  // C(1) = 1; the constant moves into lambda
  if (d.C_of_t.front() > 0) {
    const double c0 = d.C_of_t.front();
    for (auto& c : d.C_of_t) c /= c0;
  }
  std::vector<double> lx, ly;
  for (size_t i = 4; i < d.t.size(); ++i)
    if (d.C_of_t[i] > 0) {
      lx.push_back(std::log(d.t[i]));
      ly.push_back(std::log(d.C_of_t[i]));
    }
  d.gamma = lx.size() >= 2 ? -fit_line(lx, ly).slope : 0.0;
  d.decay_ok = d.gamma > 0.05 && d.C_of_t.back() < d.C_of_t.front();

  // For each a, exhibit b with C(t) <= eps^a whenever t >= eps^b, using the
  // envelope C(t) <= Kc t^{-gamma} over the ladder, then check it on the grid.
  if (d.decay_ok) {
    double Kc = 0;
    for (size_t i = 0; i < d.t.size(); ++i) Kc = std::max(Kc, d.C_of_t[i] * std::pow(d.t[i], d.gamma));
    bool ok = true;
    size_t nontrivial = 0;
    for (double a : {0.5, 1.0, 2.0}) {
      double b = 0;
      for (size_t k = 0; k < K; ++k) {
        double e = P.grid()[k];
        if (e >= 1.0) continue;
        double tstar = std::max(1.0, std::pow(Kc * std::pow(e, -a), 1.0 / d.gamma));
        b = std::min(b, std::log(tstar) / std::log(e));
      }
      d.a_to_b.emplace_back(a, b);
      for (size_t k = 0; k < K; ++k) {
        double e = P.grid()[k];
        double tmin = std::pow(e, b);
        for (size_t i = 0; i < d.t.size(); ++i) {
          if (d.t[i] < tmin) continue;
          ++d.uniform_checks;
          if (e < 1.0) ++nontrivial;
          if (d.C_of_t[i] > std::pow(e, a) * (1 + 1e-9)) ok = false;
        }
      }
    }
    d.uniform_ok = ok && nontrivial > 0;
  }
  d.verdict = d.decay_ok && d.uniform_ok && d.stronger.verdict;
  return d;
}

namespace {

// Minimise f over the unit sphere in R^n for every eps; f(xi, k) >= 0.
EllipticityReport sphere_inf(const ConstSymbol& P, int count, const std::function<double(const Point&, size_t)>& f) {
  const int n = P.dim();
  const size_t K = P.grid().size();
  std::vector<cplx> inf(K);
  EllipticityReport rep;
  rep.worst_direction.resize(K);
  for (size_t k = 0; k < K; ++k) {
    Point best{1, 0, 0};
    double bv = 0, top = 0;
    if (n == 1) {
      double a = f({1, 0, 0}, k), b = f({-1, 0, 0}, k);
      bv = std::min(a, b);
      top = std::max(a, b);
      best = a <= b ? Point{1, 0, 0} : Point{-1, 0, 0};
    } else if (n == 2) {
      auto g = [&](double t) { return f({std::cos(t), std::sin(t), 0}, k); };
      double h = 2 * kPi / count;
      int bi = 0;
      bv = g(0);
      top = bv;
      for (int i = 1; i < count; ++i) {
        double v = g(i * h);
        top = std::max(top, v);
        if (v < bv) {
          bv = v;
          bi = i;
        }
      }
      // golden section inside the bracketing cell pair
      double lo = (bi - 1) * h, hi = (bi + 1) * h;
      const double gr = 0.5 * (std::sqrt(5.0) - 1);
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      double f1 = g(x1), f2 = g(x2);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - gr * (hi - lo);
          f1 = g(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + gr * (hi - lo);
          f2 = g(x2);
        }
      }
      double tb = bi * h;
      double tm = 0.5 * (lo + hi);
      if (g(tm) < bv) {
        bv = g(tm);
        tb = tm;
      }
      best = {std::cos(tb), std::sin(tb), 0};
    } else {
      auto dirs = unit_directions(3, count);
      auto sph = [](double th, double ph) {
        return Point{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      };
      bv = f(dirs[0], k);
      best = dirs[0];
      for (auto& d : dirs) {
        double v = f(d, k);
        top = std::max(top, v);
        if (v < bv) {
          bv = v;
          best = d;
        }
      }
      // pattern search in spherical angles around the best sample
      double th = std::acos(std::clamp(best[2], -1.0, 1.0)), ph = std::atan2(best[1], best[0]);
      double step = 4.0 / std::sqrt(static_cast<double>(count));
      while (step > 1e-10) {
        bool moved = false;
        for (auto [dt, dp] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          double v = f(sph(th + dt * step, ph + dp * step), k);
          if (v < bv) {
            bv = v;
            th += dt * step;
            ph += dp * step;
            moved = true;
          }
        }
        if (!moved) step *= 0.5;
      }
      best = sph(th, ph);
    }
    // roundoff-level minima are zeros of the symbol
    inf[k] = bv <= 1e-12 * top ? 0.0 : bv;
    rep.worst_direction[k] = best;
  }
  rep.inf_net = GenNumber(P.grid(), inf);
  rep.inf_class = classify(rep.inf_net);
  rep.verdict = rep.inf_class.strictly_nonzero;
  rep.a = std::isfinite(rep.inf_class.fitted_exponent) ? rep.inf_class.fitted_exponent : 0.0;
  double c = kInfExponent;
  for (size_t k = 0; k < K; ++k) c = std::min(c, inf[k].real() * std::pow(P.grid()[k], -rep.a));
  rep.c = c;
  if (!(c > 0)) rep.verdict = false;
  return rep;
}

}  // namespace

EllipticityReport is_g_elliptic(const ConstSymbol& P, int sphere_samples) {
  ConstSymbol Pm = P.homogeneous_part(P.effective_order());
  return sphere_inf(P, sphere_samples, [&](const Point& xi, size_t k) { return std::abs(Pm.eval(xi, k)); });
}

EllipticityReport is_principal_type(const ConstSymbol& P, int sphere_samples) {
  ConstSymbol Pm = P.homogeneous_part(P.effective_order());
  const int n = P.dim();
  std::vector<ConstSymbol> grad;
  for (int d = 0; d < n; ++d) {
    MultiIndex e{0, 0, 0};
    e[d] = 1;
    grad.push_back(Pm.derive(e));
  }
  return sphere_inf(P, sphere_samples, [&](const Point& xi, size_t k) {
    double s = 0;
    for (auto& g : grad) s += std::norm(g.eval(xi, k));
    return std::sqrt(s);
  });
}

bool PropertySuiteReport::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.ok(); });
}

PropertySuiteReport property_suite(const ConstSymbol& P, const std::vector<ConstSymbol>& Qs,
                                   const CompareOptions& o) {
  PropertySuiteReport rep;
  const EpsGrid& g = P.grid();
  const int n = P.dim(), m = P.effective_order();
  auto add = [&](std::string name, bool expected, bool observed) {
    rep.checks.push_back({std::move(name), expected, observed});
  };

  std::vector<bool> weaker;
  for (size_t i = 0; i < Qs.size(); ++i) {
    bool v = is_stronger(Qs[i], P, o).verdict;
    weaker.push_back(v);
    add("Q" + std::to_string(i) + " weaker than P", true, v);
  }
  for (size_t i = 0; i < Qs.size(); ++i)
    for (size_t j = i + 1; j < Qs.size(); ++j) {
      if (!weaker[i] || !weaker[j]) continue;
      ConstSymbol comb = GenNumber::constant(g, cplx(2, 1)) * Qs[i] + GenNumber::constant(g, -3.0) * Qs[j];
      add("combination of Q" + std::to_string(i) + ",Q" + std::to_string(j) + " weaker than P", true,
          is_stronger(comb, P, o).verdict);
    }

  if (is_g_elliptic(P).verdict) {
    for (auto& al : multi_indices(n, m)) {
      ConstSymbol D = ConstSymbol::monomial(n, al, GenNumber::constant(g, 1.0));
      add("D^" + index_str(al, n) + " weaker than elliptic P", true, is_stronger(D, P, o).verdict);
    }
  }

  for (auto& al : multi_indices(n, m)) {
    if (abs_index(al) == 0) continue;
    ConstSymbol S = P + P.derive(al);
    add("P weaker than P+P^" + index_str(al, n), true, is_stronger(P, S, o).verdict);
    add("P+P^" + index_str(al, n) + " weaker than P", true, is_stronger(S, P, o).verdict);
  }

  for (size_t i = 0; i < Qs.size(); ++i) {
    if (!dominates(Qs[i], P, o).verdict) continue;
    ConstSymbol S = P + Qs[i];
    add("P weaker than P+Q" + std::to_string(i), true, is_stronger(P, S, o).verdict);
    add("P+Q" + std::to_string(i) + " weaker than P", true, is_stronger(S, P, o).verdict);
  }
  return rep;
}

}  // namespace gcs
