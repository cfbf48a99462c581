#include <gtest/gtest.h>

#include "gcs/psdo.hpp"

using namespace gcs;

namespace {

EpsGrid E;
const TorusGrid G(1, 2 * kPi, 32);

VarSymbol sym(const std::string& s, double order) { return VarSymbol::expr(1, E, Expr::parse(s), order); }

VarSymbol scaled(double b) {
  return sym("eps^" + std::to_string(b) + "*((1+xi^2)+0.3*i*sin(x)*xi)", 2);
}

double max_diff(const GridField& a, const GridField& b) {
  double m = 0;
  for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(Quantize, JapaneseBracketOnPlaneWaves) {
  for (double m : {-1.0, 1.0, 2.0}) {
    DenseOp A = quantize(sym("(1+xi^2)^(" + std::to_string(m / 2) + ")", m), G, 0);
    for (int f : {0, 3, -7}) {
      GridField u = GridField::from_function(G, [&](const Point& x) { return std::polar(1.0, f * x[0]); });
      GridField v = A.apply(u);
      double want = std::pow(1 + f * f, m / 2);
      for (size_t j = 0; j < u.size(); ++j) EXPECT_LE(std::abs(v[j] - want * u[j]), 1e-12 * want);
    }
  }
}

TEST(Quantize, IdentityAndMultiplication) {
  GridField u = GridField::from_function(G, [](const Point& x) { return cplx(std::exp(std::cos(x[0])), x[0]); });
  EXPECT_LE(max_diff(quantize(sym("1", 0), G, 0).apply(u), u), 1e-13);
  GridField c = GridField::from_function(G, [](const Point& x) { return cplx(std::sin(x[0]), 0.5); });
  EXPECT_LE(max_diff(quantize(sym("sin(x)+0.5*i", 0), G, 0).apply(u), pointwise(c, u)), 1e-12);
}

TEST(Quantize, AdjointPairing) {
  DenseOp A = quantize(scaled(0.5), G, 7);
  GridField u = GridField::from_function(G, [](const Point& x) { return cplx(std::cos(2 * x[0]), std::sin(x[0])); });
  GridField v = GridField::from_function(G, [](const Point& x) { return cplx(std::exp(-x[0] * x[0]), 0.2); });
  cplx l = inner(v, A.apply(u)), r = inner(A.adjoint(v), u);
  EXPECT_LE(std::abs(l - r), 1e-10 * std::abs(l));
  // adjoint agrees with the dense conjugate transpose
  Eigen::MatrixXcd M = A.matrix();
  Eigen::VectorXcd vv = Eigen::Map<const Eigen::VectorXcd>(v.v.data(), G.N);
  Eigen::VectorXcd w = M.adjoint() * vv;
  GridField av = A.adjoint(v);
  for (int j = 0; j < G.N; ++j) EXPECT_LE(std::abs(w[j] - av[j]), 1e-10 * (1 + std::abs(w[j])));
}

TEST(Quantize, SerialMatchesParallel) {
  DenseOp A = quantize(scaled(1), G, 3);
  GridField u = GridField::from_function(G, [](const Point& x) { return cplx(x[0], 1); });
  EXPECT_EQ(A.apply(u, Exec::Serial).v, A.apply(u, Exec::Parallel).v);
}

TEST(SobolevBound, OrderMatches) {
  auto b = sobolev_bound(sym("1+xi^2", 2), G, 1.0, 2.0);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_NEAR(b.C[k].real(), 1.0, 1e-12);
  EXPECT_EQ(b.cls.verdict, Verdict::Moderate);
  auto r = random_battery(G, 4, 9), r2 = random_battery(G, 4, 9);
  for (size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i].v, r2[i].v);
}

TEST(InvSob, ExponentTracksScaling) {
  for (double b : {0.0, 0.5, 1.0}) {
    auto r = check_inv_sob(scaled(b), G, {0, 0, 0}, 1.0, 1.0);
    EXPECT_TRUE(r.verdict);
    EXPECT_NEAR(r.cls.fitted_exponent, -b, 0.2) << "b " << b;
    EXPECT_TRUE(r.inequality.holds);
  }
}

TEST(InvSob, BatteryIsSupportedInTheBall) {
  Point x0{1.0, 0, 0};
  double d = 0.6;
  auto bat = test_battery(G, x0, d, 16);
  ASSERT_EQ(bat.size(), 16u);
  for (auto& u : bat)
    for (size_t j = 0; j < u.size(); ++j)
      if (torus_distance(G, G.node(j), x0) >= d) {
        EXPECT_EQ(u[j], cplx(0));
      }
  EXPECT_TRUE(support_inequality(bat, d, 0).holds);
}

TEST(InvSob, DegenerateAdjointThrows) {
  try {
    check_inv_sob(sym("0*xi", 1), G, {0, 0, 0}, 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AdjointDegenerate);
  }
}

TEST(RealPart, ProfileWithLowerOrderResidual) {
  auto r = real_part_profile(sym("eps^0.5*(1+xi^2+0.3*sin(x)*xi)", 2), G, 2);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.b, 0.5, 0.1);
  EXPECT_LE(r.residual_order, 1.1);
  EXPECT_THROW(real_part_profile(sym("-(1+xi^2)", 2), G, 2), Error);
}

TEST(WeakSolve, ResidualAndStrongCheck) {
  NetField F = NetField::from_expr(G, E, Expr::parse("exp(-4*x^2)"));
  auto w = weak_solve(scaled(0.5), G, F, {0, 0, 0}, 1.0, 1.0);
  ASSERT_EQ(w.eps.size(), E.size());
  for (size_t k = 0; k < E.size(); ++k) {
    EXPECT_LE(w.weak_residual[k], 1e-8);
    EXPECT_LE(w.cond[k], 1e12);
    EXPECT_LE(w.t_norm[k], w.bound[k] * (1 + 1e-9));
  }
  EXPECT_GT(w.rank_V, 0u);
  EXPECT_LE(w.rank_V, w.dim_V);
  EXPECT_TRUE(w.t_class.moderate());
}

TEST(WeakSolve, IllConditionedSymbol) {
  NetField F = NetField::from_expr(G, E, Expr::parse("exp(-4*x^2)"));
  try {
    weak_solve(sym("1-cutoff(xi/20)", 0), G, F, {0, 0, 0}, 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
  }
}
