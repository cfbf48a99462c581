#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "gcs/symbols.hpp"
#include "gcs/torus.hpp"

namespace gcs {

// Coefficient c_eps(x): an expression in (x, eps), sampled grid data per eps, or an
// affine combination sum_i g_i (f_i - f_i(x0)) of such fields with generalized-number weights.
class CoeffField {
 public:
  CoeffField();  // identically zero
  static CoeffField expr(const Expr& e);
  static CoeffField expr(std::string_view src) { return expr(Expr::parse(src)); }
  static CoeffField sampled(const NetField& f);
  // f * phi_omega(eps): f sampled on a fine grid, Gaussian damping exp(-(omega |eta|)^2 / 2)
  // of its Fourier series, then evaluated at the nodes of g
  static CoeffField mollified(const TorusGrid& g, const EpsGrid& e, const Expr& f, const Expr& width,
                              int fine_N = 256);
  static CoeffField affine(std::vector<std::pair<GenNumber, CoeffField>> parts, const Point& x0);
  // c - c(x0)
  CoeffField centered(const Point& x0) const;

  bool is_zero() const;
  bool depends_on_x() const;
  GridField on_grid(const TorusGrid& g, const EpsGrid& e, size_t k) const;
  cplx at(const Point& x, const EpsGrid& e, size_t k) const;
  GenNumber value_at(const Point& x, const EpsGrid& e) const;
  // d^alpha c on the grid; symbolic for differentiable expressions, spectral otherwise
  GridField derivative(const TorusGrid& g, const EpsGrid& e, size_t k, const MultiIndex& alpha) const;

  // bound[l][k] = max_{|alpha| = l} sup_{|x-x0| < r} |d^alpha c_eps_k|
  std::vector<std::vector<double>> derivative_bounds(const TorusGrid& g, const EpsGrid& e, const Point& x0,
                                                     double r, int order) const;

  std::string describe() const;

 private:
  enum class Kind { Zero, Expr, Sampled, Affine };
  Kind kind_ = Kind::Zero;
  Expr e_;
  std::shared_ptr<const NetField> s_;
  std::vector<std::pair<GenNumber, CoeffField>> parts_;
  Point x0_{0, 0, 0};
  struct DiffCache {
    std::mutex mu;
    std::map<MultiIndex, Expr> d;
  };
  std::shared_ptr<DiffCache> dcache_;
};

}  // namespace gcs
