// Serial reference vs OpenMP kernels. Arg 0 = Serial, 1 = Parallel.
#include <benchmark/benchmark.h>

#include "gcs/bptype.hpp"
#include "gcs/compare.hpp"
#include "gcs/fundsol.hpp"
#include "gcs/psdo.hpp"

using namespace gcs;

namespace {

const EpsGrid E;

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

ConstSymbol wave2d() {
  ConstSymbol P(2, E);
  P.add_term({2, 0, 0}, GenNumber::constant(E, 1.0));
  P.add_term({0, 2, 0}, GenNumber::from_expr(E, "-1/eps"));
  return P;
}

void BM_IsStronger(benchmark::State& s) {
  CompareOptions o;
  o.exec = exec_of(s);
  ConstSymbol Q = ConstSymbol::monomial(2, {0, 1, 0}, GenNumber::constant(E, 1.0)), P = wave2d();
  for (auto _ : s) benchmark::DoNotOptimize(is_stronger(Q, P, o));
}

void BM_FundamentalSolution(benchmark::State& s) {
  TorusGrid g(2, 2 * kPi, 64);
  ConstSymbol P = wave2d();
  for (auto _ : s) benchmark::DoNotOptimize(fundamental_solution(P, g, exec_of(s)));
}

void BM_SolveConstCoef(benchmark::State& s) {
  TorusGrid g(2, 2 * kPi, 64);
  ConstSymbol P = wave2d();
  auto F = fundamental_solution(P, g);
  NetField v = NetField::from_expr(g, E, Expr::parse("exp(-2*(x^2+y^2))"));
  for (auto _ : s) benchmark::DoNotOptimize(solve_constcoef(P, F, v, exec_of(s)));
}

void BM_DenseOpApply(benchmark::State& s) {
  TorusGrid g(1, 2 * kPi, 128);
  VarSymbol a = VarSymbol::expr(1, E, Expr::parse("(1+xi^2)+0.3*i*sin(x)*xi"), 2);
  DenseOp A = quantize(a, g, 0);
  GridField u = GridField::from_function(g, [](const Point& x) { return cplx(std::cos(x[0]), 0); });
  for (auto _ : s) benchmark::DoNotOptimize(A.apply(u, exec_of(s)));
}

void BM_SolveLocal(benchmark::State& s) {
  BPOperator bp(wave2d());
  bp.terms.push_back({CoeffField::expr("eps*sin(x)*sin(y)"), ConstSymbol::monomial(2, {1, 0, 0}, GenNumber::constant(E, 1.0)), "c1"});
  TorusGrid g(2, 2 * kPi, 32);
  auto F = f0_for(bp, g);
  SolverOptions o;
  o.exec = exec_of(s);
  NetField rhs = NetField::from_expr(g, E, Expr::parse("exp(-4*(x^2+y^2))"));
  for (auto _ : s) benchmark::DoNotOptimize(solve_local(bp, F, rhs, 0.35, o));
}

}  // namespace

BENCHMARK(BM_IsStronger)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FundamentalSolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveConstCoef)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseOpApply)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SolveLocal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
