#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gcs/coeff.hpp"

namespace gcs {

// Left quantization on the grid: (Au)(x_j) = L^{-n} sum_m exp(i x_j xi_m) a(x_j, xi_m) w_m,
// with w the grid spectrum of u. Rows of the table are nodes, columns the lattice in FFT order.
class DenseOp {
 public:
  DenseOp(const TorusGrid& g, Eigen::MatrixXcd a);
  GridField apply(const GridField& u, Exec exec = Exec::Parallel) const;
  // conjugate transpose for <u, v> = h^n sum conj(u) v
  GridField adjoint(const GridField& v, Exec exec = Exec::Parallel) const;
  Eigen::MatrixXcd matrix(Exec exec = Exec::Parallel) const;
  const Eigen::MatrixXcd& table() const { return a_; }
  const TorusGrid& grid() const { return g_; }

 private:
  cplx phase(size_t j, size_t m) const;
  TorusGrid g_;
  Eigen::MatrixXcd a_;
  Eigen::MatrixXcd ph1_;  // exp(i x_r xi_c) along one axis
};

// Symbol a_eps(x, xi) of an operator on the torus.
class VarSymbol {
 public:
  // sum_alpha c_alpha(x) xi^alpha
  static VarSymbol differential(int dim, const EpsGrid& e, std::map<MultiIndex, CoeffField> coeffs);
  // any expression in x, xi, eps
  static VarSymbol expr(int dim, const EpsGrid& e, const Expr& a, double order);
  // tables per eps on one grid
  static VarSymbol sampled(const TorusGrid& g, const EpsGrid& e, std::vector<Eigen::MatrixXcd> tabs, double order);

  int dim() const { return dim_; }
  const EpsGrid& eps() const { return eps_; }
  double order() const { return order_; }
  bool is_differential() const { return kind_ == Kind::Differential; }
  const std::map<MultiIndex, CoeffField>& coeffs() const { return coeffs_; }

  // a(x_j, xi_m + theta)
  Eigen::MatrixXcd table(const TorusGrid& g, size_t k, const Point& theta = {0, 0, 0}) const;
  // d_xi^alpha d_x^beta a on the lattice; xi-derivatives of sampled symbols are not available
  Eigen::MatrixXcd derivative_table(const TorusGrid& g, size_t k, const MultiIndex& alpha, const MultiIndex& beta,
                                    const Point& theta = {0, 0, 0}) const;
  // a(x, D_theta) u and its adjoint
  GridField apply(const TorusGrid& g, size_t k, const GridField& u, const Point& theta = {0, 0, 0}) const;
  GridField apply_adjoint(const TorusGrid& g, size_t k, const GridField& v, const Point& theta = {0, 0, 0}) const;

  // |a|^{(l)}_{alpha,beta} = sup_{x, lattice xi} |d_xi^alpha d_x^beta a| <xi>^{-l+|alpha|}, memoised
  double seminorm(const TorusGrid& g, size_t k, double l, const MultiIndex& alpha, const MultiIndex& beta) const;
  GenNumber seminorm_net(const TorusGrid& g, double l, const MultiIndex& alpha, const MultiIndex& beta) const;

 private:
  enum class Kind { Differential, Expr, Sampled };
  Kind kind_ = Kind::Differential;
  int dim_ = 1;
  EpsGrid eps_;
  double order_ = 0;
  std::map<MultiIndex, CoeffField> coeffs_;
  Expr e_;
  TorusGrid sg_;
  std::vector<Eigen::MatrixXcd> tabs_;
  struct Cache {
    std::mutex mu;
    std::map<std::tuple<int, int, double, size_t, double, MultiIndex, MultiIndex>, double> v;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace gcs
