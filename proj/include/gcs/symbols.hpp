#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gcs/epsnet.hpp"

namespace gcs {

using MultiIndex = std::array<int, 3>;

inline int abs_index(const MultiIndex& a) { return a[0] + a[1] + a[2]; }
double factorial(const MultiIndex& a);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
// All multi-indices of dimension n with |alpha| <= m, ordered by |alpha| then lexicographically.
std::vector<MultiIndex> multi_indices(int n, int m);
std::string index_str(const MultiIndex& a, int n);

// Polynomial in xi with generalized-number coefficients: sum_alpha c_alpha xi^alpha.
class ConstSymbol {
 public:
  ConstSymbol(int dim, EpsGrid grid);
  static ConstSymbol constant(int dim, const GenNumber& c);
  static ConstSymbol monomial(int dim, const MultiIndex& a, const GenNumber& c);

  int dim() const { return dim_; }
  const EpsGrid& grid() const { return grid_; }
  // Largest |alpha| among stored terms, including terms whose net is zero.
  int order() const;
  // Largest |alpha| whose coefficient is not identically zero.
  int effective_order() const;
  const std::map<MultiIndex, GenNumber>& coeffs() const { return c_; }

  void add_term(const MultiIndex& a, const GenNumber& c);
  // Terms of |alpha| == m only.
  ConstSymbol homogeneous_part(int m) const;

  ConstSymbol derive(const MultiIndex& a) const;
  cplx eval(const Point& xi, size_t k) const;
  GenNumber eval(const Point& xi) const;

  // sum over |alpha| <= order of |d^alpha P(xi)|^2 t^{2|alpha|}
  double weight_sq_at(const Point& xi, size_t k, double t = 1.0) const;
  double weight_at(const Point& xi, size_t k, double t = 1.0) const {
    return std::sqrt(weight_sq_at(xi, k, t));
  }
  GenNumber weight_sq(const Point& xi) const;
  GenNumber weight(const Point& xi) const;
  GenNumber weight_t(const Point& xi, double t) const;  // BadT for t < 1

  std::string str() const;

 private:
  int dim_;
  EpsGrid grid_;
  std::map<MultiIndex, GenNumber> c_;
};

ConstSymbol operator+(const ConstSymbol& a, const ConstSymbol& b);
ConstSymbol operator*(const ConstSymbol& a, const ConstSymbol& b);
ConstSymbol operator*(const GenNumber& g, const ConstSymbol& a);

// ---- sample sets in xi ----
struct SampleOptions {
  int min_decade = -1, max_decade = 4;
  int per_decade = 1;  // radii 10^(j/per_decade)
  int directions = 64;
};
std::vector<Point> unit_directions(int n, int count);
std::vector<Point> xi_samples(int n, const SampleOptions& o = {});

// Smallest C with weight(xi+eta) <= (1+C|xi|)^m weight(eta) on the given pairs, over all eps.
double hoermander_constant(const ConstSymbol& P, const std::vector<std::pair<Point, Point>>& pairs);
std::vector<std::pair<Point, Point>> default_pairs(int n);

struct InvertibilityReport {
  ModeratenessReport report;
  double hoermander_C = 0;
  bool transported_bound_holds = true;
  size_t transported_checks = 0;
};
InvertibilityReport weight_invertible_at(const ConstSymbol& P, const Point& xi0);

}  // namespace gcs
