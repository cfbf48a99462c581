#include <gtest/gtest.h>

#include "gcs/epsnet.hpp"

using namespace gcs;

namespace {

GenNumber net(const char* s) { return GenNumber::from_expr(EpsGrid(), s); }

GenNumber indicator(bool even) {
  EpsGrid e;
  std::vector<cplx> v(e.size());
  for (size_t k = 0; k < e.size(); ++k) v[k] = (k % 2 == 0) == even ? 1.0 : 0.0;
  return GenNumber(e, v);
}

}  // namespace

TEST(EpsGrid, DefaultIsDyadic25) {
  EpsGrid e;
  ASSERT_EQ(e.size(), 25u);
  for (size_t k = 0; k < e.size(); ++k) EXPECT_EQ(e[k], std::ldexp(1.0, -static_cast<int>(k)));
  EXPECT_EQ(e.tail_begin(), 12u);
}

TEST(EpsGrid, RejectsNonDecreasingValues) {
  EXPECT_THROW(EpsGrid(std::vector<double>{0.5, 0.5}), Error);
  EXPECT_THROW(EpsGrid::geometric(1.5, 4), Error);
}

TEST(Classify, PowerLaws) {
  auto a = classify(net("eps^-3"));
  EXPECT_EQ(a.verdict, Verdict::Moderate);
  EXPECT_NEAR(a.fitted_exponent, -3, 0.05);
  auto b = classify(net("eps^5"));
  EXPECT_EQ(b.verdict, Verdict::Moderate);
  EXPECT_NEAR(b.fitted_exponent, 5, 0.05);
}

TEST(Classify, ConstantIsModerateAndStrictlyNonzero) {
  auto c = classify(net("1"));
  EXPECT_EQ(c.verdict, Verdict::Moderate);
  EXPECT_NEAR(c.fitted_exponent, 0, 1e-12);
  EXPECT_TRUE(c.strictly_nonzero);
}

TEST(Classify, ExpMinusOneOverEpsIsNegligible) {
  GenNumber u = net("exp(-1/eps)");
  EXPECT_EQ(classify(u).verdict, Verdict::Negligible);
  // independent check: u = o(eps^16) on the tail
  EpsGrid e;
  for (size_t k = e.tail_begin(); k < e.size(); ++k) EXPECT_LT(std::abs(u[k]), std::pow(e[k], 16));
}

TEST(Classify, LogIsSlowScale) {
  auto r = classify(net("log(1/eps)"));
  EXPECT_EQ(r.verdict, Verdict::SlowScale);
  EpsGrid e;
  GenNumber u = net("log(1/eps)");
  for (int q = 1; q <= 8; ++q) {
    double c = 0;
    for (size_t k = 0; k < e.size(); ++k) c = std::max(c, std::pow(std::abs(u[k]), q) * e[k]);
    EXPECT_NEAR(r.slow_scale_c[q - 1], c, 1e-12 * c);
  }
}

TEST(Classify, SuperPolynomialGrowthIsNotModerate) {
  EXPECT_EQ(classify(net("exp(1/eps^0.25)")).verdict, Verdict::NotModerate);
}

TEST(Classify, IndicatorHasZerosAndIsNotStrictlyNonzero) {
  auto r = classify(indicator(true));
  EXPECT_FALSE(r.strictly_nonzero);
}

TEST(Valuation, PowerLaws) {
  EXPECT_NEAR(valuation(net("eps^2")), 2, 1e-9);
  EXPECT_NEAR(valuation(net("5*eps^2")), 2, 1e-9);
  EXPECT_NEAR(valuation(net("eps^2+eps^5")), 2, 0.05);
}

TEST(Valuation, SumIsUltrametric) {
  const char* nets[] = {"eps^-2", "eps", "3*eps^4", "eps^0.5"};
  for (auto a : nets)
    for (auto b : nets)
      EXPECT_GE(valuation(net(a) + net(b)), std::min(valuation(net(a)), valuation(net(b))) - 0.1) << a << " " << b;
}

TEST(Valuation, ProductAddsExponents) {
  const char* nets[] = {"eps^-2", "eps", "3*eps^4", "eps^0.5"};
  for (auto a : nets)
    for (auto b : nets)
      EXPECT_NEAR(classify(net(a) * net(b)).fitted_exponent,
                  classify(net(a)).fitted_exponent + classify(net(b)).fitted_exponent, 0.1);
}

TEST(Invert, Reciprocals) {
  GenNumber r = invert(net("eps"));
  EpsGrid e;
  for (size_t k = 0; k < e.size(); ++k) EXPECT_DOUBLE_EQ(r[k].real(), 1 / e[k]);
  GenNumber h = invert(net("2"));
  for (size_t k = 0; k < e.size(); ++k) EXPECT_EQ(h[k], cplx(0.5));
}

TEST(Invert, IndicatorIsNotInvertible) {
  try {
    invert(indicator(true));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotInvertible);
  }
}

TEST(Invert, DoubleInversionRoundTrips) {
  for (auto s : {"eps^-3", "2+sin(1/eps)", "eps^0.7*(1+i)"}) {
    GenNumber u = net(s), w = invert(invert(u));
    for (size_t k = 0; k < u.size(); ++k) EXPECT_LE(std::abs(w[k] - u[k]), 4e-16 * std::abs(u[k])) << s;
  }
}

TEST(Arithmetic, Basics) {
  GenNumber p = net("eps^-1") * net("eps^2"), e = net("eps");
  for (size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(p[k].real(), e[k].real(), 1e-15 * e[k].real());
  GenNumber one = net("1") + GenNumber::constant(EpsGrid(), 0.0);
  for (size_t k = 0; k < one.size(); ++k) EXPECT_EQ(one[k], cplx(1.0));
}

TEST(Arithmetic, ComplementaryIndicatorsSquareToOne) {
  GenNumber a = indicator(true), b = indicator(false);
  GenNumber s = a * a + b * b;
  for (size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k], cplx(1.0));
}

TEST(Arithmetic, GridMismatchThrows) {
  GenNumber a = GenNumber::constant(EpsGrid::dyadic(4), 1.0), b = net("1");
  EXPECT_THROW(a + b, Error);
}

TEST(Expr, ParseErrorsAreReported) {
  EXPECT_THROW(Expr::parse("eps^"), Error);
  EXPECT_THROW(Expr::parse("foo(eps)"), Error);
  EXPECT_THROW(GenNumber::from_expr(EpsGrid(), "x*eps"), Error);
}

TEST(Expr, EvaluatesGrammar) {
  ExprVars v;
  v.eps = 0.25;
  v.x = {0.5, 0, 0};
  EXPECT_NEAR(Expr::parse("pow(eps, 2) + exp(log(3)) - sqrt(4)*x").eval(v).real(), 0.0625 + 3 - 1, 1e-14);
  EXPECT_NEAR(Expr::parse("cutoff(1.5)").eval(v).real(), plateau(1.5), 0);
  EXPECT_EQ(Expr::parse("i*i").eval(v), cplx(-1));
}

TEST(Classify, ScatterBelowAPowerIsModerate) {
  // eps times a factor flipping between 1 and 1e-3: bad fit, no acceleration
  EpsGrid e;
  std::vector<cplx> v(e.size());
  for (size_t k = 0; k < e.size(); ++k) v[k] = e[k] * (k % 2 ? 1e-3 : 1.0);
  auto r = classify(GenNumber(e, v));
  EXPECT_GT(r.fit_residual, 0.15);
  EXPECT_EQ(r.verdict, Verdict::Moderate);
  EXPECT_EQ(classify(net("exp(1/eps^0.25)")).verdict, Verdict::NotModerate);
}

TEST(Quotient, EqualModuloNegligible) {
  EXPECT_TRUE(equal_in_g(net("1/eps + exp(-1/eps)"), net("1/eps")));
  EXPECT_TRUE(equal_in_g(net("eps^3"), net("eps^3")));
  EXPECT_FALSE(equal_in_g(net("1 + eps"), net("1")));
  // a difference below the ulp of the larger term is lost in double precision
  EXPECT_TRUE(equal_in_g(net("1/eps + eps^8"), net("1/eps")));
}
