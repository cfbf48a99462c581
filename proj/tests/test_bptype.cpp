#include <gtest/gtest.h>

#include "gcs/bptype.hpp"

using namespace gcs;

namespace {

EpsGrid E;
GenNumber net(const char* s) { return GenNumber::from_expr(E, s); }
ConstSymbol mono(MultiIndex a) { return ConstSymbol::monomial(2, a, net("1")); }

BPOperator anisotropic() {
  ConstSymbol P0(2, E);
  P0.add_term({2, 0, 0}, net("1"));
  P0.add_term({0, 2, 0}, net("-1/eps"));
  BPOperator bp(P0);
  bp.terms.push_back({CoeffField::expr("eps*sin(x)*sin(y)"), mono({1, 0, 0}), "c1"});
  bp.terms.push_back({CoeffField::expr("0.5*sin(x)*cos(y)"), mono({0, 1, 0}), "c2"});
  bp.terms.push_back({CoeffField::expr("eps*sin(x+y)"), ConstSymbol::constant(2, net("1")), "c3"});
  return bp;
}

const TorusGrid G(2, 2 * kPi, 32);

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

}  // namespace

TEST(BPOperator, ValidateRejectsNonvanishingCoefficient) {
  BPOperator bp = anisotropic();
  EXPECT_NO_THROW(bp.validate());
  bp.terms.push_back({CoeffField::expr("cos(x)"), mono({1, 0, 0}), "bad"});
  try {
    bp.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(BPOperator, ApplyMatchesFrozenPartPlusTerms) {
  BPOperator bp = anisotropic();
  GridField u = GridField::from_function(G, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  Point th{0.5, 0.25, 0};
  size_t k = 3;
  GridField expect = apply_symbol(bp.P0, k, u, th);
  for (auto& t : bp.terms) expect += pointwise(t.c.on_grid(G, E, k), apply_symbol(t.P, k, u, th));
  GridField got = bp.apply(k, u, th);
  for (size_t j = 0; j < u.size(); ++j) EXPECT_LE(std::abs(got[j] - expect[j]), 1e-12);
}

TEST(Decompose, AtPoint) {
  std::map<MultiIndex, CoeffField> c;
  c[{2, 0, 0}] = CoeffField::expr("1");
  c[{0, 2, 0}] = CoeffField::expr("1+eps*cos(x)");
  c[{1, 0, 0}] = CoeffField::expr("sin(y)");
  Point x0{0.3, 0.2, 0};
  auto d = decompose_at_point(2, E, c, x0);
  EXPECT_TRUE(d.elliptic);
  ASSERT_EQ(d.op.terms.size(), 2u);
  EXPECT_NO_THROW(d.op.validate());
  for (size_t k : {size_t(0), size_t(10)})
    EXPECT_LE(rel_diff(d.op.P0.coeffs().at({0, 2, 0})[k], 1 + E[k] * std::cos(0.3)), 1e-14);
  ASSERT_EQ(d.h3.size(), 2u);
  for (auto& r : d.h3) EXPECT_TRUE(r.verdict);
}

TEST(Decompose, SecondOrder2DReconstructsOperator) {
  // sum_j c_j P0^{(j)} must equal the lower-order part minus its value at x0
  std::map<MultiIndex, CoeffField> c;
  c[{2, 0, 0}] = CoeffField::expr("1");
  c[{0, 2, 0}] = CoeffField::expr("-1-1/eps");  // keeps 2 c20 + 2 c02 invertible
  c[{1, 0, 0}] = CoeffField::expr("eps*sin(x)");
  c[{0, 1, 0}] = CoeffField::expr("cos(y)");
  c[{0, 0, 0}] = CoeffField::expr("sin(x+y)");
  Point x0{0, 0, 0};
  BPOperator bp = decompose_2d_second_order(2, E, c, x0);
  ASSERT_EQ(bp.terms.size(), 3u);
  GridField u = GridField::from_function(G, [](const Point& x) { return cplx(std::cos(x[0] - 2 * x[1]), std::sin(x[1])); });
  for (size_t k : {size_t(0), size_t(6), size_t(18)}) {
    GridField full = GridField(G);
    for (auto& [al, cf] : c) full += pointwise(cf.on_grid(G, E, k), apply_symbol(ConstSymbol::monomial(2, al, net("1")), k, u, {0, 0, 0}));
    GridField got = bp.apply(k, u, {0, 0, 0});
    double scale = 0, diff = 0;
    for (size_t j = 0; j < u.size(); ++j) {
      scale = std::max(scale, std::abs(full[j]));
      diff = std::max(diff, std::abs(full[j] - got[j]));
    }
    EXPECT_LE(diff, 1e-10 * scale) << "eps index " << k;
  }
  c[{1, 1, 0}] = CoeffField::expr("sin(x)");
  EXPECT_THROW(decompose_2d_second_order(2, E, c, x0), Error);
}

TEST(Contraction, AdjointPairing) {
  BPOperator bp = anisotropic();
  auto F = f0_for(bp, G);
  SolverOptions o;
  ContractionOp A(bp, F, 14, 0.35, o);
  GridField g = GridField::from_function(G, [](const Point& x) { return cplx(std::sin(x[0] + 1), x[1] * x[1]); });
  GridField h = GridField::from_function(G, [](const Point& x) { return cplx(std::exp(-x[0] * x[0]), std::cos(x[1])); });
  cplx lhs = inner(h, A.apply(g)), rhs = inner(A.adjoint(h), g);
  EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
  EXPECT_FALSE(A.zero());
}

TEST(Contraction, PowerEstimateBelowBound) {
  BPOperator bp = anisotropic();
  auto F = f0_for(bp, G);
  SolverOptions o;
  auto k = WeightFn::one();
  std::vector<double> w(G.size(), 1.0);
  for (size_t e : {size_t(12), size_t(20)}) {
    ContractionOp A(bp, F, e, 0.35, o);
    EXPECT_LE(A.power_norm(w, 30, 7), A.analytic_bound(k) * (1 + 1e-9));
  }
}

TEST(Solve, AnisotropicExample) {
  BPOperator bp = anisotropic();
  auto F = f0_for(bp, G);
  SolverOptions o;
  auto ds = find_delta(bp, F, G, o);
  EXPECT_GT(ds.delta, 0);
  for (size_t k = E.tail_begin(); k < E.size(); ++k) EXPECT_LE(ds.accepted_factor[k], 0.5);
  NetField rhs = NetField::from_expr(G, E, Expr::parse("exp(-4*((x-0.1)^2+(y+0.2)^2))"));
  auto r = solve_local(bp, F, rhs, ds.delta, o);
  for (size_t i = 0; i < r.eps.size(); ++i) {
    EXPECT_LE(r.residual[i], 1e-6);
    EXPECT_LE(r.contraction[i], 0.5);
    // observed Neumann ratio respects the certified factor
    EXPECT_LE(r.max_ratio[i], r.contraction[i] + 0.05);
  }
  EXPECT_TRUE(r.T_class.moderate());
  auto& h = r.hypotheses;
  EXPECT_TRUE(h.h1 && h.h2 && h.h3 && h.h4 && h.h5 && h.h6);
}

TEST(Solve, LargePerturbationHasNoContraction) {
  TorusGrid g(1, 2 * kPi, 64);
  EpsGrid e;
  ConstSymbol P0 = ConstSymbol::monomial(1, {2, 0, 0}, GenNumber::constant(e, 1.0)) + ConstSymbol::constant(1, GenNumber::constant(e, 1.0));
  BPOperator bp(P0);
  bp.terms.push_back({CoeffField::expr("eps^-2*sin(x)"), ConstSymbol::monomial(1, {2, 0, 0}, GenNumber::constant(e, 1.0)), "big"});
  auto F = f0_for(bp, g);
  try {
    find_delta(bp, F, g);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NoContraction);
  }
}

TEST(Solve, DeltaMustFitTorus) {
  BPOperator bp = anisotropic();
  auto F = f0_for(bp, G);
  SolverOptions o;
  o.delta0 = 2.0;
  EXPECT_THROW(find_delta(bp, F, G, o), Error);
}

TEST(Solve, SerialMatchesParallel) {
  BPOperator bp = anisotropic();
  auto F = f0_for(bp, G);
  SolverOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  NetField rhs = NetField::from_expr(G, E, Expr::parse("exp(-4*(x^2+y^2))"));
  auto a = solve_local(bp, F, rhs, 0.35, s), b = solve_local(bp, F, rhs, 0.35, p);
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Necessary, Verdicts) {
  BPOperator bp = anisotropic();
  EXPECT_EQ(necessary_condition(bp, GenNumber::constant(E, 0.0)), NecessaryVerdict::Pass);
  EXPECT_EQ(necessary_condition(bp, net("1")), NecessaryVerdict::Pass);
  // a P0 whose coefficients all vanish on every other eps has a non-invertible weight
  std::vector<cplx> ind(E.size());
  for (size_t k = 0; k < E.size(); ++k) ind[k] = k % 2 ? 0.0 : 1.0;
  ConstSymbol P0(2, E);
  P0.add_term({2, 0, 0}, GenNumber(E, ind));
  P0.add_term({0, 0, 0}, GenNumber(E, ind));
  BPOperator deg(P0);
  EXPECT_EQ(necessary_condition(deg, net("1")), NecessaryVerdict::UnsolvableWarning);
  EXPECT_EQ(necessary_condition(deg, GenNumber(E, ind)), NecessaryVerdict::Pass);
}
