#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "gcs/common.hpp"

namespace gcs {

// Variables an expression may reference.
struct ExprVars {
  double eps = 1.0;
  Point x{0, 0, 0};
  Point xi{0, 0, 0};  // only symbols read these
};

// Small expression language used for nets and coefficient fields:
//   numbers, eps, x y z (also x1 x2 x3), xi xi1 xi2 xi3 (symbols only), i, pi,
//   + - * / ^, unary minus, and the functions
//   exp log sqrt sin cos tan sinh cosh tanh abs re im conj sign pow step cutoff.
// `cutoff(t)` is the smooth plateau profile (1 on |t|<=1, 0 on |t|>=2).
class Expr {
 public:
  struct Node;

  Expr();  // the constant 0
  static Expr parse(std::string_view src);
  static Expr constant(cplx c);

  cplx eval(const ExprVars& v) const;
  bool depends_on_x() const;    // any of x, y, z
  bool depends_on_eps() const;
  bool depends_on_xi() const;  // xi xi1 xi2 xi3
  // True when every node has a symbolic derivative in the spatial variables.
  bool differentiable() const;
  // d/dx_axis; requires differentiable().
  Expr diff(int axis) const;
  Expr diff_xi(int axis) const;
  std::string str() const;

  explicit Expr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
  const std::shared_ptr<const Node>& root() const { return root_; }

 private:
  std::shared_ptr<const Node> root_;
};

// Plateau profile shared by expressions and the cutoff toolbox:
// 1 for r <= 1, 0 for r >= 2, smooth in between.
double plateau(double r);

}  // namespace gcs
