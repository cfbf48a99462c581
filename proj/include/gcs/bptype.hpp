#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcs/coeff.hpp"
#include "gcs/compare.hpp"
#include "gcs/fundsol.hpp"

namespace gcs {

struct BPTerm {
  CoeffField c;
  ConstSymbol P;
  std::string name;
};

// P0(D) + sum_j c_j(x) P_j(D) near x0, with c_j(x0) = 0
struct BPOperator {
  ConstSymbol P0;
  std::vector<BPTerm> terms;
  Point x0{0, 0, 0};
  double radius = 0.5;  // working neighbourhood for derivative bounds

  BPOperator(ConstSymbol p0, Point x0_ = {0, 0, 0}) : P0(std::move(p0)), x0(x0_) {}
  int dim() const { return P0.dim(); }
  const EpsGrid& eps() const { return P0.grid(); }
  // throws InvalidArgument if some c_j(x0) != 0 or shapes disagree
  void validate() const;
  // P_eps(x, D_theta) u for a representative u
  GridField apply(size_t k, const GridField& u, const Point& theta) const;
};

struct Decomposition {
  BPOperator op;
  bool elliptic = false;
  std::vector<ComparisonReport> h3;  // P_j weaker than P0, when attached
};

// Freeze the coefficients at x0: P0 = P(x0, D), terms (c_alpha - c_alpha(x0)) D^alpha.
Decomposition decompose_at_point(int dim, const EpsGrid& eps, const std::map<MultiIndex, CoeffField>& coeffs,
                                 const Point& x0, bool attach_h3 = true);

// 2D order-2 decomposition by xi-derivatives of P0; principal coefficients constant.
struct SecondOrder2D {
  GenNumber c20, c11, c02;
  CoeffField c10, c01, c00;
};
BPOperator decompose_2d_second_order(const SecondOrder2D& in, const Point& x0);
BPOperator decompose_2d_second_order(int dim, const EpsGrid& eps, const std::map<MultiIndex, CoeffField>& coeffs,
                                     const Point& x0);

struct HypothesisOptions {
  double p = 2;
  int N = 0;        // for h5
  int h6_max_N = 4;
  double tol = 0.05;
};

struct TermHypothesis {
  std::string name;
  GenNumber lambda;
  bool h3 = false;
  double lambda_valuation = 0;
  GenNumber deriv_bound;        // sup_{|alpha|<=K} sup_Omega |d^alpha c_j|, K of h5
  double product_valuation = 0; // of deriv_bound * lambda
  std::vector<double> h6_valuations;  // N = 0..h6_max_N
};

struct HypothesisReport {
  bool h1 = false, h2 = false, h3 = false, h4 = false, h5 = false, h6 = false;
  Point h2_point{0, 0, 0};
  int h5_order = 0;
  std::vector<TermHypothesis> terms;
};

HypothesisReport check_hypotheses(const BPOperator& bp, const TorusGrid& g, const HypothesisOptions& o = {});

enum class F0Kind { Periodic, Truncated };

struct SolverOptions {
  double delta0 = 0.7;
  double p = 2;
  double s = 0;     // weight <xi>^s
  double nu = 1.0;  // k_nu window
  F0Kind f0 = F0Kind::Periodic;
  bool cutoff_squared = false;  // insert psi_{delta0}^2
  int power_steps = 20;
  double tol = 1e-12;
  int max_iter = 200;
  bool k_ladder = false;  // certify the accepted delta for s in -4..4
  unsigned seed = 12345;
  Exec exec = Exec::Parallel;
};

// A_{delta,eps} g = sum_j psi c_j P_j(D_theta)(F0 * g), one eps sample
class ContractionOp {
 public:
  ContractionOp(const BPOperator& bp, const FundamentalSolution& E, size_t k, double delta, const SolverOptions& o);
  GridField apply(const GridField& g) const;
  GridField adjoint(const GridField& g) const;
  GridField convolve_F0(const GridField& g) const;
  // power iteration in the weighted l2 norm with weight table w (FFT order)
  double power_norm(const std::vector<double>& w, int steps, unsigned seed) const;
  // 2 C1 sum_j ||psi c_j||_{1,M_k} lambda_j
  double analytic_bound(const WeightFn& k) const;
  double C1() const { return C1_; }
  const std::vector<double>& lambda() const { return lam_; }
  bool zero() const { return zero_; }

 private:
  TorusGrid g_;
  std::vector<cplx> F0hat_;
  std::vector<std::vector<cplx>> Pj_;
  std::vector<GridField> mult_;  // psi * c_j (times psi_{delta0}^2 when cutoff_squared)
  std::vector<double> lam_;
  double C1_ = 0;
  bool zero_ = true;
};

struct DeltaSearch {
  double delta = 0;
  double eps1 = 0;
  std::vector<double> ladder;
  // per ladder step, per eps: power estimate, analytic bound, factor used
  std::vector<std::vector<double>> power, bound, factor;
  std::vector<double> C1;             // at the accepted delta
  std::vector<double> accepted_factor;  // at the accepted delta
  std::vector<char> head_ok;          // eps outside the tail that also contract
  std::vector<std::pair<double, bool>> k_ladder;  // s -> contraction holds on the tail
};

FundamentalSolution f0_for(const BPOperator& bp, const TorusGrid& g, Exec exec = Exec::Parallel);
DeltaSearch find_delta(const BPOperator& bp, const FundamentalSolution& E, const TorusGrid& g,
                       const SolverOptions& o = {});

struct SolveReport {
  double delta = 0;
  double eps1 = 0;
  std::vector<double> eps;
  std::vector<double> contraction;
  std::vector<int> iterations;
  std::vector<double> residual;
  std::vector<double> max_ratio;  // worst ||g_{k+1}-g_k|| / ||g_k - g_{k-1}||
  std::vector<double> g_norm, T_norm;
  ModeratenessReport g_class, T_class;
  HypothesisReport hypotheses;
  Point theta{0, 0, 0};
  NetField solution;  // representatives, tail samples only
  std::vector<size_t> accepted;  // eps indices solved
};

// F given physically on the grid; delta from find_delta
SolveReport solve_local(const BPOperator& bp, const FundamentalSolution& E, const NetField& F, double delta,
                        const SolverOptions& o = {});

enum class NecessaryVerdict { Pass, UnsolvableWarning };
NecessaryVerdict necessary_condition(const BPOperator& bp, const GenNumber& v_at_x0);

}  // namespace gcs
