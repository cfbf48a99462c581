#include "gcs/symbols.hpp"

#include <algorithm>
#include <sstream>

namespace gcs {

double factorial(const MultiIndex& a) {
  double f = 1;
  for (int d = 0; d < 3; ++d)
    for (int i = 2; i <= a[d]; ++i) f *= i;
  return f;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

std::vector<MultiIndex> multi_indices(int n, int m) {
  std::vector<MultiIndex> out;
  for (int s = 0; s <= m; ++s) {
    if (n == 1) {
      out.push_back({s, 0, 0});
    } else if (n == 2) {
      for (int i = s; i >= 0; --i) out.push_back({i, s - i, 0});
    } else {
      for (int i = s; i >= 0; --i)
        for (int j = s - i; j >= 0; --j) out.push_back({i, j, s - i - j});
    }
  }
  return out;
}

std::string index_str(const MultiIndex& a, int n) {
  std::string s = "(";
  for (int d = 0; d < n; ++d) s += (d ? "," : "") + std::to_string(a[d]);
  return s + ")";
}

ConstSymbol::ConstSymbol(int dim, EpsGrid grid) : dim_(dim), grid_(std::move(grid)) {
  if (dim < 1 || dim > 3) fail(ErrorKind::DimensionMismatch, "symbol dimension must be 1..3");
}

ConstSymbol ConstSymbol::constant(int dim, const GenNumber& c) { return monomial(dim, {0, 0, 0}, c); }

ConstSymbol ConstSymbol::monomial(int dim, const MultiIndex& a, const GenNumber& c) {
  ConstSymbol p(dim, c.grid());
  p.add_term(a, c);
  return p;
}

int ConstSymbol::order() const {
  int m = 0;
  for (auto& [a, c] : c_) m = std::max(m, abs_index(a));
  return m;
}

int ConstSymbol::effective_order() const {
  int m = 0;
  for (auto& [a, c] : c_)
    if (!c.is_zero()) m = std::max(m, abs_index(a));
  return m;
}

void ConstSymbol::add_term(const MultiIndex& a, const GenNumber& c) {
  for (int d = dim_; d < 3; ++d)
    if (a[d] != 0) fail(ErrorKind::DimensionMismatch, "multi-index has entries beyond the symbol dimension");
  for (int d = 0; d < 3; ++d)
    if (a[d] < 0) fail(ErrorKind::InvalidArgument, "negative multi-index entry");
  require_same_grid(grid_, c.grid());
  auto it = c_.find(a);
  if (it == c_.end())
    c_.emplace(a, c);
  else
    it->second = it->second + c;
}

ConstSymbol ConstSymbol::homogeneous_part(int m) const {
  ConstSymbol p(dim_, grid_);
  for (auto& [a, c] : c_)
    if (abs_index(a) == m) p.add_term(a, c);
  return p;
}

ConstSymbol ConstSymbol::derive(const MultiIndex& al) const {
  for (int d = dim_; d < 3; ++d)
    if (al[d] != 0) fail(ErrorKind::DimensionMismatch, "derivative index exceeds symbol dimension");
  ConstSymbol p(dim_, grid_);
  for (auto& [b, c] : c_) {
    if (b[0] < al[0] || b[1] < al[1] || b[2] < al[2]) continue;
    MultiIndex r{b[0] - al[0], b[1] - al[1], b[2] - al[2]};
    GenNumber cc = c;
    cc *= factorial(b) / factorial(r);
    p.add_term(r, cc);
  }
  return p;
}

namespace {
inline double mono(const Point& xi, const MultiIndex& a) {
  double v = 1;
  for (int d = 0; d < 3; ++d)
    for (int e = 0; e < a[d]; ++e) v *= xi[d];
  return v;
}
}  // namespace

cplx ConstSymbol::eval(const Point& xi, size_t k) const {
  cplx s = 0;
  for (auto& [a, c] : c_) s += c[k] * mono(xi, a);
  return s;
}

GenNumber ConstSymbol::eval(const Point& xi) const {
  std::vector<cplx> s(grid_.size());
  for (size_t k = 0; k < s.size(); ++k) s[k] = eval(xi, k);
  return GenNumber(grid_, std::move(s));
}

double ConstSymbol::weight_sq_at(const Point& xi, size_t k, double t) const {
  const int m = order();
  double total = 0;
  for (const MultiIndex& al : multi_indices(dim_, m)) {
    cplx s = 0;
    for (auto& [b, c] : c_) {
      if (b[0] < al[0] || b[1] < al[1] || b[2] < al[2]) continue;
      MultiIndex r{b[0] - al[0], b[1] - al[1], b[2] - al[2]};
      s += c[k] * (factorial(b) / factorial(r)) * mono(xi, r);
    }
    total += std::norm(s) * std::pow(t, 2 * abs_index(al));
  }
  return total;
}

GenNumber ConstSymbol::weight_sq(const Point& xi) const {
  std::vector<cplx> s(grid_.size());
  for (size_t k = 0; k < s.size(); ++k) s[k] = weight_sq_at(xi, k);
  return GenNumber(grid_, std::move(s));
}

GenNumber ConstSymbol::weight(const Point& xi) const {
  std::vector<cplx> s(grid_.size());
  for (size_t k = 0; k < s.size(); ++k) s[k] = weight_at(xi, k);
  return GenNumber(grid_, std::move(s));
}

GenNumber ConstSymbol::weight_t(const Point& xi, double t) const {
  if (!(t >= 1.0)) fail(ErrorKind::BadT, "weight_t needs t >= 1, got " + std::to_string(t));
  std::vector<cplx> s(grid_.size());
  for (size_t k = 0; k < s.size(); ++k) s[k] = weight_at(xi, k, t);
  return GenNumber(grid_, std::move(s));
}

std::string ConstSymbol::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [a, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "c" << index_str(a, dim_) << "*xi^" << index_str(a, dim_);
  }
  if (first) os << "0";
  return os.str();
}

ConstSymbol operator+(const ConstSymbol& a, const ConstSymbol& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "adding symbols of different dimension");
  ConstSymbol r = a;
  for (auto& [al, c] : b.coeffs()) r.add_term(al, c);
  return r;
}

ConstSymbol operator*(const ConstSymbol& a, const ConstSymbol& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "multiplying symbols of different dimension");
  ConstSymbol r(a.dim(), a.grid());
  for (auto& [x, cx] : a.coeffs())
    for (auto& [y, cy] : b.coeffs()) r.add_term(x + y, cx * cy);
  return r;
}

ConstSymbol operator*(const GenNumber& g, const ConstSymbol& a) {
  ConstSymbol r(a.dim(), a.grid());
  for (auto& [x, c] : a.coeffs()) r.add_term(x, g * c);
  return r;
}

std::vector<Point> unit_directions(int n, int count) {
  std::vector<Point> d;
  if (n == 1) {
    d.push_back({1, 0, 0});
    d.push_back({-1, 0, 0});
  } else if (n == 2) {
    // uniform angles; count divisible by 4 keeps the axes in the set
    for (int i = 0; i < count; ++i) {
      double t = 2 * kPi * i / count;
      d.push_back({std::cos(t), std::sin(t), 0});
    }
  } else {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double r = std::sqrt(1 - z * z);
      d.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    for (int a = 0; a < 3; ++a)
      for (double s : {1.0, -1.0}) {
        Point p{0, 0, 0};
        p[a] = s;
        d.push_back(p);
      }
  }
  return d;
}

std::vector<Point> xi_samples(int n, const SampleOptions& o) {
  std::vector<Point> out{{0, 0, 0}};
  auto dirs = unit_directions(n, o.directions);
  const int q = std::max(1, o.per_decade);
  for (int j = o.min_decade * q; j <= o.max_decade * q; ++j) {
    double r = std::pow(10.0, static_cast<double>(j) / q);
    for (auto& u : dirs) out.push_back({r * u[0], r * u[1], r * u[2]});
  }
  return out;
}

std::vector<std::pair<Point, Point>> default_pairs(int n) {
  SampleOptions o;
  o.max_decade = 2;
  o.directions = n == 1 ? 2 : 16;
  auto s = xi_samples(n, o);
  std::vector<std::pair<Point, Point>> p;
  for (auto& a : s)
    for (auto& b : s) p.emplace_back(a, b);
  return p;
}

double hoermander_constant(const ConstSymbol& P, const std::vector<std::pair<Point, Point>>& pairs) {
  const int n = P.dim(), m = P.order();
  const size_t K = P.grid().size();
  for (size_t k = 0; k < K; ++k) {
    bool zero = true;
    for (auto& [a, c] : P.coeffs()) zero &= (c[k] == 0.0);
    if (zero) fail(ErrorKind::DegenerateSymbol, "weight vanishes identically at eps = " + std::to_string(P.grid()[k]));
  }
  if (m == 0) return 0.0;
  double C = 0;
  for (auto& [xi, eta] : pairs) {
    double r = norm(xi, n);
    if (r == 0) continue;
    Point s{xi[0] + eta[0], xi[1] + eta[1], xi[2] + eta[2]};
    for (size_t k = 0; k < K; ++k) {
      double we = P.weight_at(eta, k);
      if (we == 0) fail(ErrorKind::DegenerateSymbol, "weight vanishes at a sample point");
      double q = P.weight_at(s, k) / we;
      if (q > 1) C = std::max(C, (std::pow(q, 1.0 / m) - 1) / r);
    }
  }
  return C;
}

InvertibilityReport weight_invertible_at(const ConstSymbol& P, const Point& xi0) {
  InvertibilityReport out;
  GenNumber lam = P.weight(xi0);
  out.report = classify(lam);
  if (!out.report.strictly_nonzero) {
    out.transported_bound_holds = false;
    return out;
  }
  out.hoermander_C = hoermander_constant(P, default_pairs(P.dim()));
  const int n = P.dim(), m = P.order();
  for (const Point& xi : xi_samples(n)) {
    Point d{xi0[0] - xi[0], xi0[1] - xi[1], xi0[2] - xi[2]};
    double f = std::pow(1 + out.hoermander_C * norm(d, n), -m);
    for (size_t k = 0; k < lam.size(); ++k) {
      ++out.transported_checks;
      if (P.weight_at(xi, k) < lam[k].real() * f * (1 - 1e-12)) out.transported_bound_holds = false;
    }
  }
  return out;
}

}  // namespace gcs
