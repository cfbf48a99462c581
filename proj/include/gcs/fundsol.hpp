#pragma once

#include <vector>

#include "gcs/symbols.hpp"
#include "gcs/torus.hpp"

namespace gcs {

// Fields handled here are periodic representatives v of exp(i theta x) v.
GridField to_twisted(const GridField& u, const Point& theta);
GridField from_twisted(const GridField& v, const Point& theta);

// P_eps(xi_m + theta) on the lattice, FFT order
std::vector<cplx> symbol_table(const ConstSymbol& P, const TorusGrid& g, size_t k, const Point& theta);
std::vector<double> weight_table(const ConstSymbol& P, const TorusGrid& g, size_t k, const Point& theta);
GridField apply_symbol(const ConstSymbol& P, size_t k, const GridField& u, const Point& theta);

struct ShiftChoice {
  Point theta{0, 0, 0};
  double score = 0;
  std::vector<double> min_ratio;  // per eps at the chosen shift
  std::vector<Point> candidates;
  std::vector<double> scores;
  std::vector<char> viable;
};

struct ShiftOptions {
  double floor_const = 1e-14;  // viable iff min |P|/weight >= floor_const * eps^r_max
  double r_max = 64;
  double tie_ratio = 0.8;      // scores within this factor of the best count as ties
};

std::vector<Point> shift_candidates(const TorusGrid& g);
ShiftChoice choose_shift(const ConstSymbol& P, const TorusGrid& g, const ShiftOptions& o = {});

struct FundamentalSolution {
  TorusGrid grid;
  Point theta{0, 0, 0};
  NetField E;
  GenNumber min_symbol;           // min over the shifted lattice of |P_eps|
  std::vector<double> residual;   // ||P(D_theta)E - delta|| / ||delta||
  GenNumber l2;                   // ||E_eps||_2
  ModeratenessReport l2_class;
  std::vector<double> b_inf;      // max weight/|P| = ||E||_{inf, weight}
  ShiftChoice shift;
};

FundamentalSolution fundamental_solution(const ConstSymbol& P, const TorusGrid& g, Exec exec = Exec::Parallel,
                                         const ShiftOptions& o = {});
FundamentalSolution fundamental_solution(const ConstSymbol& P, const TorusGrid& g, const Point& theta,
                                         Exec exec = Exec::Parallel);
// ||chi E_eps||_{inf, weight_eps} per eps
std::vector<double> b_inf_constant(const ConstSymbol& P, const FundamentalSolution& E, const GridField& chi);

struct ConstSolve {
  NetField u;
  std::vector<double> residual;
  GenNumber norm;
  ModeratenessReport norm_class;
};
// u_eps = v_eps / P_eps(D_theta) for representative fields
ConstSolve solve_constcoef(const ConstSymbol& P, const FundamentalSolution& E, const NetField& v,
                           Exec exec = Exec::Parallel);

}  // namespace gcs
