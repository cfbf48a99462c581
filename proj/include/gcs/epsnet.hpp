#pragma once

#include <array>
#include <limits>
#include <vector>

#include "gcs/common.hpp"
#include "gcs/expr.hpp"

namespace gcs {

// Strictly decreasing samples of eps in (0,1].
class EpsGrid {
 public:
  EpsGrid();  // 2^{-k}, k = 0..24
  explicit EpsGrid(std::vector<double> values);
  static EpsGrid dyadic(int kmax);
  static EpsGrid geometric(double ratio, int count);

  size_t size() const { return v_.size(); }
  double operator[](size_t i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  // First index of the small-eps half used by all "eps small enough" checks.
  size_t tail_begin() const { return v_.size() / 2; }
  bool operator==(const EpsGrid& o) const { return v_ == o.v_; }
  bool operator!=(const EpsGrid& o) const { return !(*this == o); }

 private:
  std::vector<double> v_;
};

class GenNumber {
 public:
  GenNumber() = default;
  GenNumber(EpsGrid grid, std::vector<cplx> samples);
  static GenNumber constant(const EpsGrid& g, cplx c);
  // Expression in eps only; x-dependence is rejected.
  static GenNumber from_expr(const EpsGrid& g, const Expr& e);
  static GenNumber from_expr(const EpsGrid& g, std::string_view src);

  const EpsGrid& grid() const { return grid_; }
  size_t size() const { return s_.size(); }
  const cplx& operator[](size_t i) const { return s_[i]; }
  const std::vector<cplx>& samples() const { return s_; }
  double eps(size_t i) const { return grid_[i]; }

  GenNumber abs() const;
  GenNumber conj() const;
  GenNumber pow(double q) const;
  bool is_zero() const;

  GenNumber operator-() const;
  GenNumber& operator*=(cplx c);

 private:
  EpsGrid grid_;
  std::vector<cplx> s_;
};

GenNumber operator+(const GenNumber& a, const GenNumber& b);
GenNumber operator-(const GenNumber& a, const GenNumber& b);
GenNumber operator*(const GenNumber& a, const GenNumber& b);
GenNumber operator/(const GenNumber& a, const GenNumber& b);  // b must be invertible
GenNumber operator*(cplx c, const GenNumber& a);

enum class Verdict { Negligible, Moderate, SlowScale, NotModerate };
const char* verdict_name(Verdict v);

struct ClassifyOptions {
  double max_order = 64;       // N_max: slopes below -N_max are not moderate
  double residual_tol = 0.15;  // log10 units
  double steepening_tol = 1.0; // allowed slope drop between tail halves when the fit is poor
  int negligible_order = 16;   // slope above this counts as negligible
  double r_max = 64;           // strictly nonzero floor eps^{r_max}
};

struct ModeratenessReport {
  Verdict verdict = Verdict::Moderate;
  double fitted_exponent = 0;
  double fit_residual = 0;
  bool strictly_nonzero = false;
  double lower_exponent = 0;
  bool all_zero = false;
  int tested_order = 16;
  // c_q = max_eps |u|^q eps, q = 1..8
  std::array<double, 8> slow_scale_c{};
  bool moderate() const { return verdict != Verdict::NotModerate; }
};

constexpr double kInfExponent = std::numeric_limits<double>::infinity();

ModeratenessReport classify(const GenNumber& u, const ClassifyOptions& opt = {});
double valuation(const GenNumber& u, const ClassifyOptions& opt = {});
double ultra_norm(const GenNumber& u, const ClassifyOptions& opt = {});
GenNumber invert(const GenNumber& u, const ClassifyOptions& opt = {});
// equality in the quotient, judged on the samples: a - b classifies as Negligible
bool equal_in_g(const GenNumber& a, const GenNumber& b, const ClassifyOptions& opt = {});

void require_same_grid(const EpsGrid& a, const EpsGrid& b);

}  // namespace gcs
