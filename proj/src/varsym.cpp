#include "gcs/varsym.hpp"

#include <algorithm>

namespace gcs {

DenseOp::DenseOp(const TorusGrid& g, Eigen::MatrixXcd a) : g_(g), a_(std::move(a)) {
  if (a_.rows() != static_cast<long>(g.size()) || a_.cols() != static_cast<long>(g.size()))
    fail(ErrorKind::GridMismatch, "symbol table does not match the grid");
  ph1_.resize(g.N, g.N);
  for (int r = 0; r < g.N; ++r)
    for (int c = 0; c < g.N; ++c) {
      double x = -g.L / 2 + r * g.h();
      double xi = g.dxi() * (c < g.N / 2 ? c : c - g.N);
      ph1_(r, c) = std::polar(1.0, x * xi);
    }
}

cplx DenseOp::phase(size_t j, size_t m) const {
  auto a = g_.unflatten(j), b = g_.unflatten(m);
  cplx p = 1.0;
  for (int d = 0; d < g_.n; ++d) p *= ph1_(a[d], b[d]);
  return p;
}

GridField DenseOp::apply(const GridField& u, Exec exec) const {
  if (u.grid != g_) fail(ErrorKind::GridMismatch, "field lives on another grid");
  auto w = spectrum(u);
  const size_t M = g_.size();
  const double scale = 1.0 / std::pow(g_.L, g_.n);
  GridField out(g_);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (long jj = 0; jj < static_cast<long>(M); ++jj) {
    size_t j = static_cast<size_t>(jj);
    cplx s = 0;
    for (size_t m = 0; m < M; ++m) s += phase(j, m) * a_(j, m) * w[m];
    out[j] = s * scale;
  }
  return out;
}

GridField DenseOp::adjoint(const GridField& v, Exec exec) const {
  if (v.grid != g_) fail(ErrorKind::GridMismatch, "field lives on another grid");
  const size_t M = g_.size();
  std::vector<cplx> s(M);
  const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (long mm = 0; mm < static_cast<long>(M); ++mm) {
    size_t m = static_cast<size_t>(mm);
    cplx t = 0;
    for (size_t j = 0; j < M; ++j) t += std::conj(a_(j, m) * phase(j, m)) * v[j];
    s[m] = t * g_.cell();
  }
  return from_spectrum(g_, s);
}

Eigen::MatrixXcd DenseOp::matrix(Exec exec) const {
  const size_t M = g_.size();
  Eigen::MatrixXcd A(M, M);
  for (size_t c = 0; c < M; ++c) {
    GridField e(g_);
    e[c] = 1.0;
    GridField col = apply(e, exec);
    for (size_t r = 0; r < M; ++r) A(r, c) = col[r];
  }
  return A;
}

VarSymbol VarSymbol::differential(int dim, const EpsGrid& e, std::map<MultiIndex, CoeffField> coeffs) {
  VarSymbol s;
  s.kind_ = Kind::Differential;
  s.dim_ = dim;
  s.eps_ = e;
  for (auto& [a, c] : coeffs) {
    for (int d = dim; d < 3; ++d)
      if (a[d] != 0) fail(ErrorKind::DimensionMismatch, "multi-index uses an axis beyond the dimension");
    if (!c.is_zero()) s.order_ = std::max<double>(s.order_, abs_index(a));
  }
  s.coeffs_ = std::move(coeffs);
  return s;
}

VarSymbol VarSymbol::expr(int dim, const EpsGrid& e, const Expr& a, double order) {
  VarSymbol s;
  s.kind_ = Kind::Expr;
  s.dim_ = dim;
  s.eps_ = e;
  s.e_ = a;
  s.order_ = order;
  return s;
}

VarSymbol VarSymbol::sampled(const TorusGrid& g, const EpsGrid& e, std::vector<Eigen::MatrixXcd> tabs, double order) {
  if (tabs.size() != e.size()) fail(ErrorKind::GridMismatch, "one table per eps sample is required");
  for (auto& t : tabs)
    if (t.rows() != static_cast<long>(g.size()) || t.cols() != static_cast<long>(g.size()))
      fail(ErrorKind::GridMismatch, "symbol table does not match the grid");
  VarSymbol s;
  s.kind_ = Kind::Sampled;
  s.dim_ = g.n;
  s.eps_ = e;
  s.sg_ = g;
  s.tabs_ = std::move(tabs);
  s.order_ = order;
  return s;
}

namespace {

double mono(const Point& xi, const MultiIndex& a) {
  double v = 1;
  for (int d = 0; d < 3; ++d)
    for (int i = 0; i < a[d]; ++i) v *= xi[d];
  return v;
}

// d_xi^alpha xi^gamma = gamma!/(gamma-alpha)! xi^(gamma-alpha)
double dmono(const Point& xi, const MultiIndex& g, const MultiIndex& a) {
  double c = 1;
  MultiIndex r{};
  for (int d = 0; d < 3; ++d) {
    if (a[d] > g[d]) return 0;
    r[d] = g[d] - a[d];
    for (int i = 0; i < a[d]; ++i) c *= g[d] - i;
  }
  return c * mono(xi, r);
}

Point shifted(const TorusGrid& g, size_t m, const Point& th) {
  Point xi = g.freq(m);
  for (int d = 0; d < 3; ++d) xi[d] += th[d];
  return xi;
}

}  // namespace

Eigen::MatrixXcd VarSymbol::table(const TorusGrid& g, size_t k, const Point& theta) const {
  return derivative_table(g, k, {0, 0, 0}, {0, 0, 0}, theta);
}

Eigen::MatrixXcd VarSymbol::derivative_table(const TorusGrid& g, size_t k, const MultiIndex& alpha,
                                             const MultiIndex& beta, const Point& theta) const {
  if (g.n != dim_) fail(ErrorKind::DimensionMismatch, "symbol and grid dimensions differ");
  const size_t M = g.size();
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(M, M);
  switch (kind_) {
    case Kind::Differential:
      for (auto& [gam, c] : coeffs_) {
        if (c.is_zero()) continue;
        GridField cx = c.derivative(g, eps_, k, beta);
        for (size_t m = 0; m < M; ++m) {
          double p = dmono(shifted(g, m, theta), gam, alpha);
          if (p == 0) continue;
          for (size_t j = 0; j < M; ++j) T(j, m) += cx[j] * p;
        }
      }
      return T;
    case Kind::Expr: {
      Expr d = e_;
      for (int ax = 0; ax < 3; ++ax)
        for (int i = 0; i < alpha[ax]; ++i) d = d.diff_xi(ax);
      bool spectral = false;
      if (abs_index(beta) > 0) {
        if (d.differentiable()) {
          for (int ax = 0; ax < 3; ++ax)
            for (int i = 0; i < beta[ax]; ++i) d = d.diff(ax);
        } else {
          spectral = true;
        }
      }
      for (size_t j = 0; j < M; ++j)
        for (size_t m = 0; m < M; ++m) {
          ExprVars v{eps_[k], g.node(j), shifted(g, m, theta)};
          T(j, m) = d.eval(v);
        }
      if (spectral)
        for (size_t m = 0; m < M; ++m) {
          GridField col(g);
          for (size_t j = 0; j < M; ++j) col[j] = T(j, m);
          col = spectral_derivative(col, beta);
          for (size_t j = 0; j < M; ++j) T(j, m) = col[j];
        }
      return T;
    }
    case Kind::Sampled: {
      if (g != sg_) fail(ErrorKind::GridMismatch, "sampled symbol lives on another grid");
      if (abs_index(alpha) > 0) fail(ErrorKind::InvalidArgument, "xi-derivatives of a sampled symbol");
      if (theta != Point{0, 0, 0}) fail(ErrorKind::InvalidArgument, "sampled symbol on a shifted lattice");
      T = tabs_[k];
      if (abs_index(beta) > 0)
        for (size_t m = 0; m < M; ++m) {
          GridField col(g);
          for (size_t j = 0; j < M; ++j) col[j] = T(j, m);
          col = spectral_derivative(col, beta);
          for (size_t j = 0; j < M; ++j) T(j, m) = col[j];
        }
      return T;
    }
  }
  return T;
}

GridField VarSymbol::apply(const TorusGrid& g, size_t k, const GridField& u, const Point& theta) const {
  if (kind_ != Kind::Differential) return DenseOp(g, table(g, k, theta)).apply(u);
  GridField r(g);
  for (auto& [gam, c] : coeffs_) {
    if (c.is_zero()) continue;
    GridField cx = c.on_grid(g, eps_, k);
    GridField d = fourier_multiplier(u, [&](const Point& xi) { return cplx(mono(xi, gam)); }, theta);
    for (size_t j = 0; j < r.size(); ++j) r[j] += cx[j] * d[j];
  }
  return r;
}

GridField VarSymbol::apply_adjoint(const TorusGrid& g, size_t k, const GridField& v, const Point& theta) const {
  if (kind_ != Kind::Differential) return DenseOp(g, table(g, k, theta)).adjoint(v);
  GridField r(g);
  for (auto& [gam, c] : coeffs_) {
    if (c.is_zero()) continue;
    GridField cx = c.on_grid(g, eps_, k);
    for (auto& z : cx.v) z = std::conj(z);
    r += fourier_multiplier(pointwise(cx, v), [&](const Point& xi) { return cplx(mono(xi, gam)); }, theta);
  }
  return r;
}

double VarSymbol::seminorm(const TorusGrid& g, size_t k, double l, const MultiIndex& alpha,
                           const MultiIndex& beta) const {
  auto key = std::make_tuple(g.n, g.N, g.L, k, l, alpha, beta);
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->v.find(key);
    if (it != cache_->v.end()) return it->second;
  }
  Eigen::MatrixXcd T = derivative_table(g, k, alpha, beta);
  double s = 0;
  for (long m = 0; m < T.cols(); ++m) {
    double w = std::pow(japanese(norm(g.freq(m), g.n)), -l + abs_index(alpha));
    s = std::max(s, T.col(m).cwiseAbs().maxCoeff() * w);
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->v[key] = s;
  return s;
}

GenNumber VarSymbol::seminorm_net(const TorusGrid& g, double l, const MultiIndex& alpha, const MultiIndex& beta) const {
  std::vector<cplx> v(eps_.size());
  for (size_t k = 0; k < v.size(); ++k) v[k] = seminorm(g, k, l, alpha, beta);
  return GenNumber(eps_, v);
}

}  // namespace gcs
