#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gcs/epsnet.hpp"

namespace gcs {

// n-dimensional periodic grid, N nodes per axis, period L per axis.
// Nodes x_j = -L/2 + j h; frequencies (2 pi / L) * {-N/2 .. N/2-1}, stored in FFT order.
struct TorusGrid {
  int n = 1;
  double L = 2 * kPi;
  int N = 64;

  TorusGrid() = default;
  TorusGrid(int n_, double L_, int N_);

  size_t size() const;
  double h() const { return L / N; }
  double dxi() const { return 2 * kPi / L; }
  double cell() const { return std::pow(h(), n); }
  Point node(size_t j) const;
  Point freq(size_t j) const;  // unshifted lattice point at flat spectral index j
  std::array<int, 3> unflatten(size_t j) const;
  size_t flatten(const std::array<int, 3>& i) const;  // indices taken mod N
  // index of the node nearest to p
  size_t nearest_node(const Point& p) const;
  bool operator==(const TorusGrid& o) const { return n == o.n && L == o.L && N == o.N; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

struct GridField {
  TorusGrid grid;
  std::vector<cplx> v;

  GridField() = default;
  explicit GridField(const TorusGrid& g) : grid(g), v(g.size(), 0.0) {}
  GridField(const TorusGrid& g, std::vector<cplx> vals);
  static GridField from_function(const TorusGrid& g, const std::function<cplx(const Point&)>& f);
  // unit-mass discrete delta at the node x = 0
  static GridField delta(const TorusGrid& g);

  size_t size() const { return v.size(); }
  cplx& operator[](size_t i) { return v[i]; }
  const cplx& operator[](size_t i) const { return v[i]; }
  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(cplx c);
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(cplx c, GridField a);
GridField pointwise(const GridField& a, const GridField& b);

struct NetField {
  TorusGrid grid;
  EpsGrid eps;
  std::vector<GridField> f;

  NetField() = default;
  NetField(const TorusGrid& g, const EpsGrid& e) : grid(g), eps(e), f(e.size(), GridField(g)) {}
  static NetField from_expr(const TorusGrid& g, const EpsGrid& e, const Expr& ex);
  size_t size() const { return f.size(); }
};

// ---- transforms ----
// w_m = h^n sum_j u_j exp(-i xi_m x_j), FFT order.
std::vector<cplx> spectrum(const GridField& u);
// inverse: u_j = L^{-n} sum_m w_m exp(i xi_m x_j)
GridField from_spectrum(const TorusGrid& g, const std::vector<cplx>& w);

double l2_norm(const GridField& u);
double l2_norm_on(const GridField& u, const std::vector<char>& mask);
cplx inner(const GridField& a, const GridField& b);  // h^n sum conj(a) b

// Multiplier on the shifted lattice xi_m + theta. Fields are periodic representatives
// of exp(i theta x) v, so this realises P(D) on the twisted functions.
GridField fourier_multiplier(const GridField& u, const std::function<cplx(const Point&)>& sym,
                             const Point& theta = {0, 0, 0});
GridField multiply_spectrum(const GridField& u, const std::vector<cplx>& m);
std::vector<cplx> tabulate_symbol(const TorusGrid& g, const std::function<cplx(const Point&)>& s,
                                  const Point& theta = {0, 0, 0});
// periodic convolution h^n sum_k u1(x_k) u2(x_j - x_k); spectrum is the product
GridField convolve(const GridField& u1, const GridField& u2);
// spectral partial derivative d/dx_axis of a periodic field
GridField spectral_derivative(const GridField& u, const std::array<int, 3>& alpha);
// trigonometric interpolation at an arbitrary point
cplx interpolate(const GridField& u, const Point& x);

// Move between layouts: kernel with the origin at node index N/2 vs at index 0.
GridField to_origin_layout(const GridField& u);

// ---- weights ----
struct WeightFn {
  std::function<double(const Point&)> k;
  double C = 0, N = 0;  // certificate k(xi+eta) <= (1+C|xi|)^N k(eta)
  std::string name = "1";
  bool is_power = false;
  double s = 0;

  double operator()(const Point& xi) const { return k(xi); }
  static WeightFn one();
  static WeightFn japanese(double s);  // <xi>^s
};

bool check_certificate(const WeightFn& k, int n, double slack = 1e-12);
std::vector<double> tabulate(const WeightFn& k, const TorusGrid& g, const Point& theta = {0, 0, 0});
// closed form for a Japanese-bracket power: sup_eta <xi+eta>^s / <eta>^s
double peetre_sup(double r, double s);
WeightFn m_k(const WeightFn& k, const TorusGrid& g);
// lattice brute force sup_eta k(xi+eta)/k(eta) with eta over the grid lattice within radius R
double m_k_lattice(const WeightFn& k, const TorusGrid& g, const Point& xi, double R);
WeightFn k_nu(const WeightFn& k, double nu, const TorusGrid& g);

// ---- norms ----
double bpk_norm(const GridField& u, double p, const WeightFn& k, const Point& theta = {0, 0, 0});
double bpk_norm_hat(const TorusGrid& g, const std::vector<cplx>& w, double p, const std::vector<double>& ktab);
double sobolev_norm(const GridField& u, double s, const Point& theta = {0, 0, 0});

// ---- cutoffs ----
// psi((x-x0)/delta): 1 on |x-x0| <= delta, 0 on |x-x0| >= 2 delta, minimum-image distance
GridField cutoff(const TorusGrid& g, const Point& x0, double delta);
double torus_distance(const TorusGrid& g, const Point& a, const Point& b);
std::vector<char> ball_mask(const TorusGrid& g, const Point& x0, double r);

// ---- export ----
std::string field_csv(const GridField& u);
std::string spectrum_csv(const GridField& u);

}  // namespace gcs
