#pragma once

#include <string>
#include <vector>

#include "gcs/varsym.hpp"

namespace gcs {

DenseOp quantize(const VarSymbol& a, const TorusGrid& g, size_t k, const Point& theta = {0, 0, 0});

// Random band-limited fields for operator-norm estimates.
std::vector<GridField> random_battery(const TorusGrid& g, int count, unsigned seed);

struct SobolevBound {
  GenNumber C;  // per eps: max ||Au||_{s-m} / ||u||_s over the battery
  ModeratenessReport cls;
};
SobolevBound sobolev_bound(const VarSymbol& a, const TorusGrid& g, double s, double m, int battery = 16,
                           unsigned seed = 12345, Exec exec = Exec::Parallel);

// Smooth fields supported in |x - x0| < delta: bump times scaled monomials, and bump times lattice modes.
std::vector<GridField> test_battery(const TorusGrid& g, const Point& x0, double delta, int count = 32);

struct InequalityCheck {
  bool holds = false;
  double worst = 0;  // max ||phi||_m / (2 delta ||phi||_{m+1})
};
// ||phi||_m <= 2 delta ||phi||_{m+1} on the battery
InequalityCheck support_inequality(const std::vector<GridField>& battery, double delta, double m);

struct InvSobReport {
  GenNumber lambda;  // max_phi ||phi||_s / ||A* phi||_0
  ModeratenessReport cls;
  bool verdict = false;     // Moderate lambda; certified on the battery only
  std::string label = "certified on battery";
  std::vector<size_t> worst;  // battery index per eps
  InequalityCheck inequality;
  size_t battery_size = 0;
};
// Throws AdjointDegenerate when A* phi = 0 for some phi.
InvSobReport check_inv_sob(const VarSymbol& a, const TorusGrid& g, const Point& x0, double delta, double s,
                           int count = 32, Exec exec = Exec::Parallel);

struct RealPartProfile {
  double b = 0, c0 = 0, m = 0;
  double residual_order = 0;     // fitted <xi>-order of Re a - c0 eps^b <xi>^m
  double residual_exponent = 0;  // its fitted eps-exponent
  bool pass = false;
};
// Throws ProfileFails.
RealPartProfile real_part_profile(const VarSymbol& a, const TorusGrid& g, double m);

struct WeakSolveOptions {
  double ridge = 1e-12;
  double max_cond = 1e12;
  double rank_tol = 1e-10;  // relative singular value cut for the test space
  Exec exec = Exec::Parallel;
};

struct WeakSolveReport {
  std::vector<double> eps;
  std::vector<double> weak_residual, strong_residual, cond, t_norm, bound;
  size_t dim_V = 0, rank_V = 0;
  ModeratenessReport t_class;
  NetField solution;
};

// t in span{A* phi : phi in V} with <A* phi, t> = <phi, F> for phi in V. Throws IllConditioned.
WeakSolveReport weak_solve(const VarSymbol& a, const TorusGrid& g, const NetField& F, const Point& x0, double delta,
                           double s, const WeakSolveOptions& o = {});

}  // namespace gcs
