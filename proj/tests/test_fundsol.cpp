#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gcs/fundsol.hpp"

using namespace gcs;

namespace {

EpsGrid E;
GenNumber net(const char* s) { return GenNumber::from_expr(E, s); }

ConstSymbol helmholtz1d() {
  ConstSymbol P = ConstSymbol::monomial(1, {2, 0, 0}, net("1"));
  return P + ConstSymbol::constant(1, net("1"));
}

ConstSymbol wave2d() {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, net("1"));
  P.add_term({0, 2, 0}, net("-1/eps"));
  return P;
}

// P(D_theta) as a dense matrix built from the DFT by hand
Eigen::MatrixXcd circulant(const ConstSymbol& P, const TorusGrid& g, size_t k, const Point& theta) {
  const int N = g.N;
  Eigen::MatrixXcd A(N, N);
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) {
      cplx s = 0;
      for (int m = -N / 2; m < N / 2; ++m) {
        double xi = m * g.dxi();
        s += P.eval({xi + theta[0], 0, 0}, k) * std::exp(cplx(0, xi * (g.node(j)[0] - g.node(l)[0])));
      }
      A(j, l) = s * g.h() / g.L;
    }
  return A;
}

}  // namespace

TEST(Fundsol, OneDimensionalMatchesDenseSolve) {
  TorusGrid g(1, 2 * kPi, 256);
  ConstSymbol P = helmholtz1d();
  auto F = fundamental_solution(P, g);
  GridField d = GridField::delta(g);
  for (size_t k : {size_t(0), size_t(12), size_t(24)}) {
    Eigen::MatrixXcd A = circulant(P, g, k, F.theta);
    Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(d.v.data(), g.N);
    Eigen::VectorXcd e = A.partialPivLu().solve(rhs);
    double scale = e.cwiseAbs().maxCoeff(), diff = 0;
    for (int j = 0; j < g.N; ++j) diff = std::max(diff, std::abs(e[j] - F.E.f[k][j]));
    EXPECT_LE(diff, 1e-10 * scale) << "eps index " << k;
  }
  for (double r : F.residual) EXPECT_LE(r, 1e-10);
}

TEST(Fundsol, AnisotropicWaveResidual) {
  TorusGrid g(2, 2 * kPi, 64);
  auto F = fundamental_solution(wave2d(), g);
  for (double r : F.residual) EXPECT_LE(r, 1e-10);
  // the symbol vanishes at xi = 0, so the chosen shift must move off the lattice
  EXPECT_GT(norm(F.theta, 2), 0);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_GT(F.min_symbol[k].real(), 0);
  EXPECT_TRUE(F.l2_class.moderate());
}

TEST(Fundsol, ExplicitShiftAndTwist) {
  TorusGrid g(1, 2 * kPi, 64);
  ConstSymbol P = ConstSymbol::monomial(1, {1, 0, 0}, net("1"));  // D vanishes at 0
  auto F = fundamental_solution(P, g, Point{0.5, 0, 0});
  for (double r : F.residual) EXPECT_LE(r, 1e-12);
  // twisting is invertible
  GridField u = GridField::from_function(g, [](const Point& x) { return cplx(std::cos(x[0]), x[0]); });
  GridField w = from_twisted(to_twisted(u, {0.5, 0, 0}), {0.5, 0, 0});
  for (size_t j = 0; j < u.size(); ++j) EXPECT_LE(std::abs(w[j] - u[j]), 1e-14);
}

TEST(Fundsol, ShiftChoiceAvoidsZeros) {
  TorusGrid g(1, 2 * kPi, 32);
  ConstSymbol P = ConstSymbol::monomial(1, {1, 0, 0}, net("1"));
  auto s = choose_shift(P, g);
  // xi + theta never hits an integer
  EXPECT_GT(std::abs(std::remainder(s.theta[0], 1.0)), 0.1);
  ASSERT_EQ(s.candidates.size(), s.scores.size());
  for (double m : s.min_ratio) EXPECT_GT(m, 0);
}

TEST(Fundsol, ConstantCoefficientSolve) {
  TorusGrid g(2, 2 * kPi, 32);
  ConstSymbol P = wave2d();
  auto F = fundamental_solution(P, g);
  NetField v = NetField::from_expr(g, E, Expr::parse("exp(-2*(x^2+y^2))*(1+eps)"));
  auto s = solve_constcoef(P, F, v);
  for (double r : s.residual) EXPECT_LE(r, 1e-10);
  for (size_t k : {size_t(0), size_t(20)}) {
    GridField back = apply_symbol(P, k, s.u.f[k], F.theta);
    double scale = 0, diff = 0;
    for (size_t j = 0; j < back.size(); ++j) {
      scale = std::max(scale, std::abs(v.f[k][j]));
      diff = std::max(diff, std::abs(back[j] - v.f[k][j]));
    }
    EXPECT_LE(diff, 1e-10 * scale);
  }
  EXPECT_TRUE(s.norm_class.moderate());
}

TEST(Fundsol, SerialMatchesParallel) {
  TorusGrid g(2, 2 * kPi, 32);
  auto a = fundamental_solution(wave2d(), g, Exec::Serial);
  auto b = fundamental_solution(wave2d(), g, Exec::Parallel);
  ASSERT_EQ(a.theta, b.theta);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_EQ(a.E.f[k].v, b.E.f[k].v);
}

TEST(Fundsol, WeightBoundIsFinite) {
  TorusGrid g(1, 2 * kPi, 64);
  ConstSymbol P = helmholtz1d();
  auto F = fundamental_solution(P, g);
  auto chi = cutoff(g, {0, 0, 0}, 0.5);
  auto b = b_inf_constant(P, F, chi);
  ASSERT_EQ(b.size(), E.size());
  for (double v : b) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0);
  }
}

TEST(Fundsol, SymbolTableMatchesEval) {
  TorusGrid g(2, 2 * kPi, 8);
  ConstSymbol P = wave2d();
  Point th{0.25, 0.5, 0};
  auto t = symbol_table(P, g, 3, th);
  for (size_t m = 0; m < g.size(); ++m) {
    Point xi = g.freq(m);
    EXPECT_EQ(t[m], P.eval({xi[0] + th[0], xi[1] + th[1], 0}, 3));
  }
}
