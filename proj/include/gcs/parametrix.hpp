#pragma once

#include <string>
#include <vector>

#include "gcs/varsym.hpp"

namespace gcs {

// |P| >= c eps^{a'} <xi>^{m'} for |xi| >= R, seminorms O(eps^a). R = 0 means no excision.
struct HypoProfile {
  double a = 0, a_prime = 0;
  double m_prime = 0;
  double R = 1;
  double c = 0;
};

struct ProfileOptions {
  int max_order = 4;    // |alpha| + |beta| for (i) and (iii)
  double tol = 0.1;     // slack on fitted eps-exponents
  ClassifyOptions classify;
};

struct ProfileCheck {
  bool pass = false;
  bool cond_i = false, cond_ii = false, cond_iii = false;
  double i_exponent = 0;    // worst fitted exponent of |P|^{(m)}_{alpha,beta}
  GenNumber c_ii;           // min_{x, |xi| >= R} |P| / (eps^{a'} <xi>^{m'})
  double iii_exponent = 0;  // worst fitted exponent of the (iii) ratio constants
  std::string failed;       // first violated condition
  std::string witness;
  bool via_elliptic = false;
  HypoProfile profile;
};

ProfileCheck check_profile(const VarSymbol& P, const TorusGrid& g, const HypoProfile& cand,
                           const ProfileOptions& o = {});

// Profile from ellipticity near x0: |P(x, xi)| >= c0 eps^a <xi>^m for |xi| >= R_eps, |x - x0| < r.
struct EllipticNearPoint {
  GenNumber c0;   // per eps lower constant
  double a = 0;   // fitted exponent
  std::vector<double> R_eps;
  bool capped = false;  // some R_eps hit the lattice radius
  ProfileCheck check;
};
EllipticNearPoint elliptic_near_point(const VarSymbol& P, const TorusGrid& g, const Point& x0, double r,
                                      const ProfileOptions& o = {});

struct ParametrixTerms {
  TorusGrid grid;
  EpsGrid eps;
  HypoProfile profile;
  std::vector<std::vector<Eigen::MatrixXcd>> q;   // [j][k]
  std::vector<std::vector<double>> telescoping;   // [j][k], relative defect on |xi| >= 2R, j >= 1
  std::vector<std::vector<double>> weighted_sup;  // [j][k]: sup |q_j| <xi>^{m'+j}
  std::vector<double> decay;                      // fitted <xi>-slope of sup_x |q_j|, worst over eps
};

ParametrixTerms parametrix_terms(const VarSymbol& P, const TorusGrid& g, const HypoProfile& prof, int J = 4,
                                 Exec exec = Exec::Parallel);

struct AsymptoticSum {
  std::vector<Eigen::MatrixXcd> q;    // per eps
  std::vector<double> R;              // excision radius per term
  std::vector<double> contribution;   // worst over eps, after excision
  std::vector<char> dropped;          // radius beyond the lattice
};

AsymptoticSum asymptotic_sum(const ParametrixTerms& t);

struct RemainderReport {
  std::vector<Eigen::MatrixXcd> r;                 // symbol of P o q - I per eps
  std::vector<double> sup_l1, sup_l3;              // |r|^{(-n-1)}_{0,0}, |r|^{(-n-3)}_{0,0}
  ModeratenessReport l1_class;
  double xi_growth = 0;                            // shell slope of the l1-weighted sup
  bool smoothing = false;
  bool bounded = false;                            // fitted eps-slope >= -0.1
  std::vector<double> kernel_sup;                  // sup |k_r(x, y)|
  ModeratenessReport kernel_class;
};

// Alias-free route: r(., xi_m) = P(x, D_{xi_m}) q(., xi_m) - 1. Throws RemainderNotSmoothing.
RemainderReport compose_remainder(const VarSymbol& P, const TorusGrid& g, const AsymptoticSum& q,
                                  Exec exec = Exec::Parallel);

// q o P - I through the grid operators; sup |s| <xi>^{n+1} per eps and its fitted exponent
struct LeftRemainder {
  std::vector<double> sup;
  ModeratenessReport cls;
};
LeftRemainder left_remainder(const VarSymbol& P, const TorusGrid& g, const AsymptoticSum& q);

struct ParametrixSolveOptions {
  double delta0 = 1.0;
  int power_steps = 20;
  double tol = 1e-12;
  int max_iter = 200;
  unsigned seed = 12345;
  Exec exec = Exec::Parallel;
};

struct ParametrixSolveReport {
  double delta = 0;
  double eps1 = 0;
  std::vector<double> ladder;
  std::vector<double> eps, contraction, residual, max_ratio;
  std::vector<int> iterations;
  std::vector<ModeratenessReport> derivative_classes;  // ||d^beta T||_{L2(Omega)}, |beta| <= 2
  bool regular = false;
  NetField solution;
  std::vector<size_t> accepted;
};

// T = q(x,D)(phi w), w + R(phi w) = phi F with R = P q - I on the grid
ParametrixSolveReport solve_via_parametrix(const VarSymbol& P, const TorusGrid& g, const AsymptoticSum& q,
                                           const NetField& F, const Point& x0,
                                           const ParametrixSolveOptions& o = {});

}  // namespace gcs
