#include <random>

#include <gtest/gtest.h>

#include "gcs/symbols.hpp"

using namespace gcs;

namespace {

EpsGrid E;
GenNumber net(const char* s) { return GenNumber::from_expr(E, s); }
GenNumber one() { return GenNumber::constant(E, 1.0); }

GenNumber indicator(bool even) {
  std::vector<cplx> v(E.size());
  for (size_t k = 0; k < E.size(); ++k) v[k] = (k % 2 == 0) == even ? 1.0 : 0.0;
  return GenNumber(E, v);
}

// a_eps xi + i with a_eps = 1/eps
ConstSymbol affine1d() {
  ConstSymbol P(1, E);
  P.add_term({1, 0, 0}, net("1/eps"));
  P.add_term({0, 0, 0}, GenNumber::constant(E, cplx(0, 1)));
  return P;
}

ConstSymbol indicator_symbol() {
  ConstSymbol P(2, E);
  P.add_term({1, 0, 0}, indicator(true));
  P.add_term({0, 1, 0}, cplx(0, 1) * indicator(false));
  return P;
}

}  // namespace

TEST(MultiIndex, Enumeration) {
  auto v = multi_indices(2, 2);
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v[0], (MultiIndex{0, 0, 0}));
  EXPECT_EQ(v[5], (MultiIndex{0, 2, 0}));
  EXPECT_EQ(multi_indices(3, 3).size(), 20u);
}

TEST(Derive, Examples) {
  ConstSymbol P = ConstSymbol::monomial(1, {2, 0, 0}, one());
  ConstSymbol d = P.derive({1, 0, 0});
  EXPECT_EQ(d.eval({3, 0, 0}, 0), cplx(6));
  ConstSymbol a = affine1d().derive({1, 0, 0});
  for (size_t k = 0; k < E.size(); ++k) EXPECT_DOUBLE_EQ(a.eval({7, 0, 0}, k).real(), 1 / E[k]);
  EXPECT_EQ(P.derive({3, 0, 0}).eval({1.3, 0, 0}, 0), cplx(0));
}

TEST(Derive, ComposesAdditively) {
  ConstSymbol P(2, E);
  P.add_term({3, 1, 0}, net("eps"));
  P.add_term({1, 2, 0}, net("2-eps"));
  P.add_term({0, 1, 0}, net("eps^-1"));
  for (auto a : multi_indices(2, 2))
    for (auto b : multi_indices(2, 2)) {
      ConstSymbol x = P.derive(a).derive(b), y = P.derive(a + b);
      for (size_t k = 0; k < E.size(); k += 5) EXPECT_EQ(x.eval({0.7, -1.3, 0}, k), y.eval({0.7, -1.3, 0}, k));
    }
}

TEST(Eval, AgainstMonomialSum) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  ConstSymbol P(2, E);
  std::map<MultiIndex, cplx> c;
  for (auto a : multi_indices(2, 3)) {
    c[a] = cplx(u(rng), u(rng));
    P.add_term(a, GenNumber::constant(E, c[a]));
  }
  for (int t = 0; t < 20; ++t) {
    Point xi{u(rng), u(rng), 0};
    cplx s = 0;
    for (auto& [a, v] : c) s += v * std::pow(xi[0], a[0]) * std::pow(xi[1], a[1]);
    EXPECT_LE(std::abs(P.eval(xi, 0) - s), 1e-12 * (1 + std::abs(s)));
  }
  EXPECT_EQ(affine1d().eval({0, 0, 0}, 3), cplx(0, 1));
}

TEST(WeightSq, AffineClosedForm) {
  GenNumber w = affine1d().weight_sq({0, 0, 0});
  for (size_t k = 0; k < E.size(); ++k) {
    double a = 1 / E[k];
    EXPECT_NEAR(w[k].real(), 1 + a * a, 1e-12 * (1 + a * a));
  }
}

TEST(WeightSq, IndicatorSymbolAtOneOne) {
  GenNumber w = indicator_symbol().weight_sq({1, 1, 0});
  for (size_t k = 0; k < E.size(); ++k) EXPECT_NEAR(w[k].real(), 2.0, 1e-12);
}

TEST(WeightSq, TwoScaleClosedForm) {
  const double a = 1, b = 0;
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, net("eps"));
  P.add_term({0, 2, 0}, -1.0 * net("1"));
  for (Point xi : {Point{0.3, 2, 0}, Point{-5, 1e2, 0}, Point{1e3, -1e-1, 0}}) {
    GenNumber w = P.weight_sq(xi);
    for (size_t k = 0; k < E.size(); ++k) {
      double ea = std::pow(E[k], a), eb = std::pow(E[k], b);
      double v = std::pow(ea * xi[0] * xi[0] - eb * xi[1] * xi[1], 2) + std::pow(2 * ea * xi[0], 2) +
                 std::pow(2 * eb * xi[1], 2) + 4 * ea * ea + 4 * eb * eb;
      EXPECT_NEAR(w[k].real(), v, 1e-12 * v);
    }
  }
}

TEST(WeightSq, DominatesModulus) {
  ConstSymbol P = affine1d();
  for (double x : {-10.0, -0.1, 0.0, 3.0})
    for (size_t k = 0; k < E.size(); ++k)
      EXPECT_GE(P.weight_sq_at({x, 0, 0}, k), std::norm(P.eval({x, 0, 0}, k)));
}

TEST(WeightT, Properties) {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, net("eps"));
  P.add_term({1, 1, 0}, net("2"));
  P.add_term({0, 0, 0}, net("1"));
  Point xi{0.4, -2, 0};
  GenNumber w1 = P.weight(xi), wt = P.weight_t(xi, 1.0);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_EQ(w1[k], wt[k]);
  for (auto a : multi_indices(2, 2)) {
    if (abs_index(a) == 0) continue;
    ConstSymbol Pa = P.derive(a);
    for (double t : {1.0, 2.0, 10.0})
      for (size_t k = 0; k < E.size(); k += 3)
        EXPECT_LE(Pa.weight_at(xi, k, t), std::pow(t, -abs_index(a)) * P.weight_at(xi, k, t) * (1 + 1e-12));
  }
  ConstSymbol c = ConstSymbol::constant(2, GenNumber::constant(E, cplx(3, 4)));
  for (double t : {1.0, 5.0}) EXPECT_NEAR(c.weight_t(xi, t)[0].real(), 5, 1e-14);
  EXPECT_THROW(P.weight_t(xi, 0.5), Error);
}

TEST(Hoermander, Constants) {
  EXPECT_EQ(hoermander_constant(ConstSymbol::constant(1, one()), default_pairs(1)), 0.0);
  double C = hoermander_constant(ConstSymbol::monomial(1, {1, 0, 0}, one()), default_pairs(1));
  EXPECT_GT(C, 0);
  EXPECT_LE(C, 2);
}

TEST(Hoermander, ProductBoundedByFactors) {
  ConstSymbol P = ConstSymbol::monomial(1, {1, 0, 0}, one()) + ConstSymbol::constant(1, net("eps"));
  ConstSymbol Q = ConstSymbol::monomial(1, {2, 0, 0}, net("eps^0.5")) + ConstSymbol::constant(1, one());
  auto pairs = default_pairs(1);
  double cp = hoermander_constant(P, pairs), cq = hoermander_constant(Q, pairs), cpq = hoermander_constant(P * Q, pairs);
  // (1+Cp r)^1 (1+Cq r)^2 <= (1+max r)^3
  EXPECT_LE(cpq, std::max(cp, cq) * (1 + 1e-9));
}

TEST(Product, WeightComparableToProductOfWeights) {
  ConstSymbol P = ConstSymbol::monomial(2, {1, 0, 0}, net("eps")) + ConstSymbol::constant(2, one());
  ConstSymbol Q = ConstSymbol::monomial(2, {0, 2, 0}, one()) + ConstSymbol::monomial(2, {1, 0, 0}, net("eps^-1"));
  ConstSymbol PQ = P * Q;
  double lo = kInfExponent, hi = 0;
  for (auto xi : xi_samples(2))
    for (size_t k = 0; k < E.size(); ++k) {
      double r = PQ.weight_at(xi, k) / (P.weight_at(xi, k) * Q.weight_at(xi, k));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  // constants independent of eps; generous but finite
  EXPECT_GT(lo, 1e-3);
  EXPECT_LT(hi, 1e3);
}

TEST(Product, SupCharacterisation) {
  // weight(xi, t) / C <= sup_{|eta| < t} |P(xi + eta)| <= C weight(xi, t) with one C
  ConstSymbol P = ConstSymbol::monomial(1, {2, 0, 0}, net("eps")) + ConstSymbol::constant(1, one());
  double lo = kInfExponent, hi = 0;
  for (double x : {-30.0, -1.0, 0.0, 0.5, 8.0})
    for (double t : {1.0, 3.0, 10.0})
      for (size_t k = 0; k < E.size(); k += 4) {
        double s = 0;
        for (int r = 0; r < 16; ++r)
          for (int sgn : {-1, 1}) s = std::max(s, std::abs(P.eval({x + sgn * t * r / 16.0, 0, 0}, k)));
        double q = s / P.weight_at({x, 0, 0}, k, t);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
  EXPECT_GT(lo, 0.05);
  EXPECT_LT(hi, 20);
}

TEST(WeightInvertible, Examples) {
  ConstSymbol P = ConstSymbol::monomial(1, {2, 0, 0}, net("eps^0.5"));
  auto r = weight_invertible_at(P, {0, 0, 0});
  EXPECT_TRUE(r.report.strictly_nonzero);
  EXPECT_NEAR(r.report.fitted_exponent, 0.5, 1e-6);
  EXPECT_LE(r.report.lower_exponent, 0.5 + 1e-12);
  auto s = weight_invertible_at(indicator_symbol(), {1, 1, 0});
  EXPECT_TRUE(s.report.strictly_nonzero);
  ConstSymbol Z(1, E);
  EXPECT_FALSE(weight_invertible_at(Z, {0, 0, 0}).report.strictly_nonzero);
}

TEST(Samples, LogSpacedShells) {
  auto s = xi_samples(2);
  double rmin = kInfExponent, rmax = 0;
  for (auto& p : s) {
    if (norm(p, 2) > 0) rmin = std::min(rmin, norm(p, 2));
    rmax = std::max(rmax, norm(p, 2));
  }
  EXPECT_NEAR(rmin, 0.1, 1e-12);
  EXPECT_NEAR(rmax, 1e4, 1e-6);
}
