#include "gcs/coeff.hpp"

#include <algorithm>

namespace gcs {

CoeffField::CoeffField() : dcache_(std::make_shared<DiffCache>()) {}

CoeffField CoeffField::expr(const Expr& e) {
  if (e.depends_on_xi()) fail(ErrorKind::InvalidArgument, "coefficient depends on xi: " + e.str());
  CoeffField c;
  c.kind_ = Kind::Expr;
  c.e_ = e;
  return c;
}

CoeffField CoeffField::sampled(const NetField& f) {
  CoeffField c;
  c.kind_ = Kind::Sampled;
  c.s_ = std::make_shared<const NetField>(f);
  return c;
}

CoeffField CoeffField::mollified(const TorusGrid& g, const EpsGrid& e, const Expr& f, const Expr& width,
                                 int fine_N) {
  TorusGrid fg(g.n, g.L, std::max(fine_N, g.N));
  GridField base(fg);
  for (size_t j = 0; j < base.size(); ++j) base[j] = f.eval({1.0, fg.node(j)});
  auto w = spectrum(base);
  NetField out(g, e);
  for (size_t k = 0; k < e.size(); ++k) {
    double om = width.eval({e[k], {0, 0, 0}}).real();
    if (!(om > 0)) fail(ErrorKind::InvalidArgument, "mollifier width must be positive");
    std::vector<cplx> wk(w.size());
    for (size_t m = 0; m < w.size(); ++m) {
      double r = norm(fg.freq(m), fg.n);
      wk[m] = w[m] * std::exp(-0.5 * om * om * r * r);
    }
    GridField fine = from_spectrum(fg, wk);
    for (size_t j = 0; j < g.size(); ++j) out.f[k][j] = interpolate(fine, g.node(j));
  }
  return sampled(out);
}

CoeffField CoeffField::affine(std::vector<std::pair<GenNumber, CoeffField>> parts, const Point& x0) {
  CoeffField c;
  c.kind_ = Kind::Affine;
  c.parts_ = std::move(parts);
  c.x0_ = x0;
  return c;
}

CoeffField CoeffField::centered(const Point& x0) const {
  if (kind_ == Kind::Zero) return *this;
  EpsGrid g;
  if (kind_ == Kind::Sampled) g = s_->eps;
  if (kind_ == Kind::Affine && !parts_.empty()) g = parts_[0].first.grid();
  return affine({{GenNumber::constant(g, 1.0), *this}}, x0);
}

bool CoeffField::is_zero() const {
  switch (kind_) {
    case Kind::Zero: return true;
    case Kind::Expr: return !e_.depends_on_x() && !e_.depends_on_eps() && e_.eval({}) == 0.0;
    case Kind::Sampled:
      for (auto& f : s_->f)
        for (auto& z : f.v)
          if (z != 0.0) return false;
      return true;
    case Kind::Affine:
      for (auto& [g, f] : parts_)
        if (!g.is_zero() && f.depends_on_x()) return false;
      return true;
  }
  return true;
}

bool CoeffField::depends_on_x() const {
  switch (kind_) {
    case Kind::Zero: return false;
    case Kind::Expr: return e_.depends_on_x();
    case Kind::Sampled: return true;
    case Kind::Affine:
      for (auto& [g, f] : parts_)
        if (f.depends_on_x()) return true;
      return false;
  }
  return false;
}

namespace {
void check_eps(const EpsGrid& a, const EpsGrid& b) { require_same_grid(a, b); }
}  // namespace

cplx CoeffField::at(const Point& x, const EpsGrid& e, size_t k) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Expr: return e_.eval({e[k], x});
    case Kind::Sampled: check_eps(s_->eps, e); return interpolate(s_->f[k], x);
    case Kind::Affine: {
      cplx s = 0;
      for (auto& [g, f] : parts_) s += g[k] * (f.at(x, e, k) - f.at(x0_, e, k));
      return s;
    }
  }
  return 0.0;
}

GenNumber CoeffField::value_at(const Point& x, const EpsGrid& e) const {
  std::vector<cplx> v(e.size());
  for (size_t k = 0; k < e.size(); ++k) v[k] = at(x, e, k);
  return GenNumber(e, v);
}

GridField CoeffField::on_grid(const TorusGrid& g, const EpsGrid& e, size_t k) const {
  return derivative(g, e, k, {0, 0, 0});
}

GridField CoeffField::derivative(const TorusGrid& g, const EpsGrid& e, size_t k, const MultiIndex& alpha) const {
  const bool order0 = abs_index(alpha) == 0;
  switch (kind_) {
    case Kind::Zero: return GridField(g);
    case Kind::Expr: {
      if (!order0 && !e_.differentiable()) return spectral_derivative(on_grid(g, e, k), alpha);
      Expr d = e_;
      if (!order0) {
        std::lock_guard<std::mutex> lock(dcache_->mu);
        // build d^alpha by peeling one axis at a time, memoised
        std::vector<MultiIndex> chain;
        MultiIndex a = alpha;
        while (abs_index(a) > 0 && !dcache_->d.count(a)) {
          chain.push_back(a);
          for (int ax = 0; ax < 3; ++ax)
            if (a[ax] > 0) {
              --a[ax];
              break;
            }
        }
        Expr cur = abs_index(a) == 0 ? e_ : dcache_->d.at(a);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
          int ax = 0;
          while ((*it)[ax] == a[ax]) ++ax;
          cur = cur.diff(ax);
          dcache_->d[*it] = cur;
          a = *it;
        }
        d = cur;
      }
      GridField u(g);
      for (size_t j = 0; j < u.size(); ++j) u[j] = d.eval({e[k], g.node(j)});
      return u;
    }
    case Kind::Sampled: {
      check_eps(s_->eps, e);
      if (s_->grid != g) fail(ErrorKind::GridMismatch, "sampled coefficient lives on another grid");
      return order0 ? s_->f[k] : spectral_derivative(s_->f[k], alpha);
    }
    case Kind::Affine: {
      GridField u(g);
      for (auto& [gn, f] : parts_) {
        GridField d = f.derivative(g, e, k, alpha);
        cplx off = order0 ? f.at(x0_, e, k) : 0.0;
        for (size_t j = 0; j < u.size(); ++j) u[j] += gn[k] * (d[j] - off);
      }
      return u;
    }
  }
  return GridField(g);
}

std::vector<std::vector<double>> CoeffField::derivative_bounds(const TorusGrid& g, const EpsGrid& e, const Point& x0,
                                                               double r, int order) const {
  std::vector<std::vector<double>> out(order + 1, std::vector<double>(e.size(), 0.0));
  auto mask = ball_mask(g, x0, r);
  for (int l = 0; l <= order; ++l)
    for (auto& al : multi_indices(g.n, l)) {
      if (abs_index(al) != l) continue;
      for (size_t k = 0; k < e.size(); ++k) {
        GridField d = derivative(g, e, k, al);
        double m = 0;
        for (size_t j = 0; j < d.size(); ++j)
          if (mask[j]) m = std::max(m, std::abs(d[j]));
        out[l][k] = std::max(out[l][k], m);
      }
    }
  return out;
}

std::string CoeffField::describe() const {
  switch (kind_) {
    case Kind::Zero: return "0";
    case Kind::Expr: return e_.str();
    case Kind::Sampled: return "<sampled>";
    case Kind::Affine: {
      std::string s;
      for (auto& [g, f] : parts_) s += (s.empty() ? "" : " + ") + std::string("g*(") + f.describe() + " - f(x0))";
      return s.empty() ? "0" : s;
    }
  }
  return "?";
}

}  // namespace gcs
