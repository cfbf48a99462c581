#include <gtest/gtest.h>

#include "gcs/compare.hpp"

using namespace gcs;

namespace {

EpsGrid E;
GenNumber net(const std::string& s) { return GenNumber::from_expr(E, s); }
GenNumber one() { return GenNumber::constant(E, 1.0); }
ConstSymbol mono(int n, MultiIndex a, GenNumber c) { return ConstSymbol::monomial(n, a, c); }

ConstSymbol two_scale(double a, double b) {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, net("eps^" + std::to_string(a)));
  P.add_term({0, 2, 0}, -1.0 * net("eps^" + std::to_string(b)));
  return P;
}

ConstSymbol anisotropic_wave() {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, one());
  P.add_term({0, 2, 0}, net("-1/eps"));
  return P;
}

ConstSymbol elliptic(double a) {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, net("eps^" + std::to_string(a)));
  P.add_term({0, 2, 0}, net("eps^" + std::to_string(a)));
  return P;
}

double max_lambda(const ComparisonReport& r) {
  double m = 0;
  for (size_t k = 0; k < r.lambda.size(); ++k) m = std::max(m, r.lambda[k].real());
  return m;
}

}  // namespace

TEST(IsStronger, Reflexive) {
  for (auto P : {anisotropic_wave(), elliptic(0.5), two_scale(1, 0)}) {
    auto r = is_stronger(P, P);
    EXPECT_TRUE(r.verdict);
    for (size_t k = 0; k < r.lambda.size(); ++k) EXPECT_EQ(r.lambda[k], cplx(1.0));
  }
}

TEST(IsStronger, DyAgainstAnisotropicWave) {
  auto r = is_stronger(mono(2, {0, 1, 0}, one()), anisotropic_wave());
  EXPECT_TRUE(r.verdict);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_LE(r.lambda[k].real(), 0.5 * E[k] + 1e-10) << "eps " << E[k];
}

TEST(IsStronger, TwoScaleComparisons) {
  ConstSymbol P0 = two_scale(1, 0);
  ConstSymbol P1 = P0.derive({1, 0, 0}), P2 = P0.derive({0, 1, 0});
  ConstSymbol P3 = ConstSymbol::constant(2, net("eps"));  // c = 1
  for (auto& Q : {P1, P2, P3}) {
    auto r = is_stronger(Q, P0);
    EXPECT_TRUE(r.verdict);
    EXPECT_LE(max_lambda(r), 1.0 + 1e-12);
  }
}

TEST(IsStronger, ScaleEquivariant) {
  ConstSymbol P = anisotropic_wave(), Q = mono(2, {1, 0, 0}, one());
  auto a = is_stronger(Q, P), b = is_stronger(GenNumber::constant(E, cplx(0, -3)) * Q, P);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_NEAR(b.lambda[k].real(), 3 * a.lambda[k].real(), 1e-12 * b.lambda[k].real());
}

TEST(IsStronger, TransitiveCertificates) {
  ConstSymbol R = elliptic(0.5) + ConstSymbol::constant(2, one());
  ConstSymbol P = mono(2, {1, 0, 0}, one()) + ConstSymbol::constant(2, one());
  ConstSymbol Q = ConstSymbol::constant(2, net("eps"));
  auto qp = is_stronger(Q, P), pr = is_stronger(P, R), qr = is_stronger(Q, R);
  for (size_t k = 0; k < E.size(); ++k)
    EXPECT_GE(qp.lambda[k].real() * pr.lambda[k].real(), qr.lambda[k].real() * (1 - 1e-9));
}

TEST(IsStronger, NonEllipticFails) {
  auto r = is_stronger(mono(2, {2, 0, 0}, one()), mono(2, {1, 1, 0}, one()));
  EXPECT_FALSE(r.verdict);
  EXPECT_NE(r.status, Status::Holds);
  EXPECT_FALSE(r.witnesses.empty());
}

TEST(IsStronger, SerialMatchesParallel) {
  CompareOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  auto a = is_stronger(mono(2, {0, 1, 0}, one()), anisotropic_wave(), s);
  auto b = is_stronger(mono(2, {0, 1, 0}, one()), anisotropic_wave(), p);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_EQ(a.lambda[k], b.lambda[k]);
}

TEST(PropertySuite, EllipticAgainstAllMonomials) {
  ConstSymbol P = elliptic(0.5) + ConstSymbol::constant(2, one());
  std::vector<ConstSymbol> Qs;
  for (auto a : multi_indices(2, 2)) Qs.push_back(mono(2, a, one()));
  ASSERT_EQ(Qs.size(), 6u);
  for (auto& Q : Qs) {
    auto r = is_stronger(Q, P);
    EXPECT_TRUE(r.verdict);
    EXPECT_TRUE(r.lambda_class.moderate());
  }
  EXPECT_TRUE(property_suite(P, Qs).all_ok());
}

TEST(PropertySuite, PerturbationByDerivativeIsEquivalent) {
  ConstSymbol P = anisotropic_wave();
  ConstSymbol P2 = P + P.derive({1, 0, 0});
  EXPECT_TRUE(is_stronger(P, P2).verdict);
  EXPECT_TRUE(is_stronger(P2, P).verdict);
}

TEST(Dominates, Derivatives) {
  ConstSymbol P = elliptic(0.5) + ConstSymbol::constant(2, one());
  for (MultiIndex a : {MultiIndex{1, 0, 0}, MultiIndex{0, 2, 0}}) {
    auto d = dominates(P.derive(a), P);
    EXPECT_TRUE(d.verdict);
    for (size_t i = 0; i < d.t.size(); ++i) {
      EXPECT_LE(d.raw_sup[i], std::pow(d.t[i], -abs_index(a)) * (1 + 1e-9));
      if (i > 0) {
        EXPECT_LE(d.C_of_t[i], d.C_of_t[i - 1]);
      }
    }
    EXPECT_TRUE(d.stronger.verdict);  // domination implies comparison
  }
  auto self = dominates(P, P);
  EXPECT_FALSE(self.decay_ok);
  EXPECT_FALSE(self.verdict);
}

TEST(Dominates, PrincipalTypeOverLowerOrder) {
  ConstSymbol P = anisotropic_wave();
  ConstSymbol Q = mono(2, {1, 0, 0}, net("eps^-1")) + ConstSymbol::constant(2, net("2"));
  auto d = dominates(Q, P);
  EXPECT_TRUE(d.verdict);
  EXPECT_NEAR(d.gamma, 1.0, 0.2);
}

TEST(Ellipticity, Laplacian) {
  auto r = is_g_elliptic(elliptic(0.5));
  EXPECT_TRUE(r.verdict);
  EXPECT_NEAR(r.a, 0.5, 1e-6);
  for (size_t k = 0; k < E.size(); ++k) EXPECT_NEAR(r.inf_net[k].real(), std::pow(E[k], 0.5), 1e-9 * std::pow(E[k], 0.5));
}

TEST(Ellipticity, DegenerateSymbols) {
  EXPECT_FALSE(is_g_elliptic(mono(2, {1, 1, 0}, one())).verdict);
  EXPECT_FALSE(is_g_elliptic(two_scale(1, 0)).verdict);
}

TEST(Ellipticity, FrozenCutoffNet) {
  // phi(x/eps) D^2 frozen at x
  auto frozen = [](double x) {
    return ConstSymbol::monomial(1, {2, 0, 0}, GenNumber::from_expr(E, "cutoff(" + std::to_string(x) + "/eps)"));
  };
  EXPECT_TRUE(is_g_elliptic(frozen(0.0)).verdict);
  EXPECT_FALSE(is_g_elliptic(frozen(0.1)).verdict);
}

TEST(PrincipalType, Examples) {
  auto a = is_principal_type(mono(2, {1, 0, 0}, one()));
  EXPECT_TRUE(a.verdict);
  EXPECT_NEAR(a.inf_net[0].real(), 1.0, 1e-12);
  EXPECT_TRUE(is_principal_type(anisotropic_wave()).verdict);
  EXPECT_FALSE(is_principal_type(mono(2, {2, 0, 0}, one())).verdict);
}

TEST(PropertySuite, IndicatorNetBreaksEllipticity) {
  // the xi2^2 coefficient vanishes on every other eps, so P is not elliptic
  std::vector<cplx> ind(E.size());
  for (size_t k = 0; k < E.size(); ++k) ind[k] = k % 2 ? 0.0 : 1.0;
  ConstSymbol P = mono(2, {2, 0, 0}, one()) + mono(2, {0, 2, 0}, GenNumber(E, ind)) + ConstSymbol::constant(2, one());
  EXPECT_FALSE(is_g_elliptic(P).verdict);
  EXPECT_TRUE(is_stronger(mono(2, {2, 0, 0}, one()), P).verdict);
  auto r = is_stronger(mono(2, {0, 2, 0}, one()), P);
  EXPECT_FALSE(r.verdict);
  EXPECT_EQ(r.status, Status::Fails);
}
