#include <gtest/gtest.h>

#include "gcs/fundsol.hpp"
#include "gcs/parametrix.hpp"

using namespace gcs;

namespace {

EpsGrid E;
const TorusGrid G(1, 2 * kPi, 32);

// eps^{-1/2} D^2 plus mollified jump coefficients of lower order
VarSymbol rough() {
  Expr w = Expr::parse("1/(1+log(1/eps))");
  std::map<MultiIndex, CoeffField> c;
  c[{2, 0, 0}] = CoeffField::expr("eps^(-0.5)");
  c[{1, 0, 0}] = CoeffField::mollified(G, E, Expr::parse("0.3*sign(sin(x))"), w);
  c[{0, 0, 0}] = CoeffField::mollified(G, E, Expr::parse("0.1+0.2*i*sign(cos(x))"), w);
  return VarSymbol::differential(1, E, c);
}

const HypoProfile kRough{-0.5, -0.5, 2, 0.5, 0};

double worst(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST(Profile, AcceptsAndRejects) {
  VarSymbol P = rough();
  auto ok = check_profile(P, G, kRough);
  EXPECT_TRUE(ok.pass) << ok.failed << " " << ok.witness;
  EXPECT_TRUE(ok.cond_i && ok.cond_ii && ok.cond_iii);
  // claiming a better lower bound than the symbol has must fail (ii)
  HypoProfile tight = kRough;
  tight.a_prime = -1.0;
  tight.m_prime = 3;
  auto bad = check_profile(P, G, tight);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.failed.empty());
}

TEST(Profile, EllipticNearPoint) {
  auto r = elliptic_near_point(rough(), G, {0, 0, 0}, 0.5);
  EXPECT_NEAR(r.a, -0.5, 0.1);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_GT(r.c0[k].real(), 0);
}

TEST(Parametrix, TermsTelescopeAndDecay) {
  auto t = parametrix_terms(rough(), G, kRough, 4);
  ASSERT_EQ(t.q.size(), 4u);
  for (int j = 1; j <= 3; ++j) {
    EXPECT_LE(worst(t.telescoping[j]), 1e-8) << "j " << j;
    EXPECT_LE(t.decay[j], -(2.0 + j) + 0.3) << "j " << j;
  }
  EXPECT_NEAR(t.decay[0], -2, 0.3);
}

TEST(Parametrix, BadProfileThrows) {
  HypoProfile tight = kRough;
  tight.a_prime = -1.0;
  tight.m_prime = 3;
  try {
    parametrix_terms(rough(), G, tight, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProfileFails);
  }
}

TEST(Parametrix, RemainderIsBoundedAndSmoothing) {
  VarSymbol P = rough();
  auto s = asymptotic_sum(parametrix_terms(P, G, kRough, 4));
  auto r = compose_remainder(P, G, s);
  EXPECT_TRUE(r.smoothing);
  EXPECT_TRUE(r.bounded);
  EXPECT_GE(r.l1_class.fitted_exponent, -0.1);
}

TEST(Parametrix, LocalSolve) {
  VarSymbol P = rough();
  auto s = asymptotic_sum(parametrix_terms(P, G, kRough, 4));
  NetField F = NetField::from_expr(G, E, Expr::parse("exp(-4*(x-0.1)^2)"));
  auto r = solve_via_parametrix(P, G, s, F, {0, 0, 0});
  EXPECT_GT(r.delta, 0);
  for (size_t i = 0; i < r.eps.size(); ++i) {
    EXPECT_LE(r.residual[i], 1e-6);
    EXPECT_LE(r.contraction[i], 0.5);
  }
  EXPECT_TRUE(r.regular);
}

TEST(Parametrix, ConstantCoefficientsAgreeWithFundamentalSolution) {
  // no excision: q = 1/P exactly, R = 0 and T = P^{-1}(phi^2 F)
  std::map<MultiIndex, CoeffField> c;
  c[{2, 0, 0}] = CoeffField::expr("eps^(-0.5)");
  c[{0, 0, 0}] = CoeffField::expr("eps^(-0.5)");
  VarSymbol P = VarSymbol::differential(1, E, c);
  HypoProfile prof{-0.5, -0.5, 2, 0, 0};
  auto s = asymptotic_sum(parametrix_terms(P, G, prof, 3));
  NetField F = NetField::from_expr(G, E, Expr::parse("exp(-4*x^2)"));
  ParametrixSolveOptions o;
  auto r = solve_via_parametrix(P, G, s, F, {0, 0, 0}, o);

  ConstSymbol P0(1, E);
  P0.add_term({2, 0, 0}, GenNumber::from_expr(E, "eps^(-0.5)"));
  P0.add_term({0, 0, 0}, GenNumber::from_expr(E, "eps^(-0.5)"));
  auto fs = fundamental_solution(P0, G, Point{0, 0, 0});
  GridField phi = cutoff(G, {0, 0, 0}, r.delta);
  NetField v(G, E);
  for (size_t k = 0; k < E.size(); ++k) v.f[k] = pointwise(pointwise(phi, phi), F.f[k]);
  auto u = solve_constcoef(P0, fs, v);
  for (size_t k : r.accepted) {
    double scale = 0, diff = 0;
    for (size_t j = 0; j < G.size(); ++j) {
      scale = std::max(scale, std::abs(u.u.f[k][j]));
      diff = std::max(diff, std::abs(u.u.f[k][j] - r.solution.f[k][j]));
    }
    EXPECT_LE(diff, 1e-10 * scale) << "eps " << E[k];
  }
}

TEST(Parametrix, SerialMatchesParallel) {
  VarSymbol P = rough();
  auto a = parametrix_terms(P, G, kRough, 3, Exec::Serial), b = parametrix_terms(P, G, kRough, 3, Exec::Parallel);
  for (size_t j = 0; j < a.q.size(); ++j)
    for (size_t k = 0; k < E.size(); ++k) EXPECT_EQ(a.q[j][k], b.q[j][k]);
}
