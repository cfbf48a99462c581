#include "gcs/torus.hpp"

#include <algorithm>
#include <sstream>

#include "gcs/fft.hpp"

namespace gcs {

TorusGrid::TorusGrid(int n_, double L_, int N_) : n(n_), L(L_), N(N_) {
  if (n < 1 || n > 3) fail(ErrorKind::DimensionMismatch, "torus dimension must be 1..3");
  if (N < 2 || (N & (N - 1)) != 0) fail(ErrorKind::InvalidArgument, "N must be a power of two");
  if (!(L > 0)) fail(ErrorKind::InvalidArgument, "period must be positive");
}

size_t TorusGrid::size() const {
  size_t s = 1;
  for (int d = 0; d < n; ++d) s *= static_cast<size_t>(N);
  return s;
}

std::array<int, 3> TorusGrid::unflatten(size_t j) const {
  std::array<int, 3> i{0, 0, 0};
  for (int d = n - 1; d >= 0; --d) {
    i[d] = static_cast<int>(j % N);
    j /= N;
  }
  return i;
}

size_t TorusGrid::flatten(const std::array<int, 3>& i) const {
  size_t j = 0;
  for (int d = 0; d < n; ++d) j = j * N + static_cast<size_t>(((i[d] % N) + N) % N);
  return j;
}

Point TorusGrid::node(size_t j) const {
  auto i = unflatten(j);
  Point p{0, 0, 0};
  for (int d = 0; d < n; ++d) p[d] = -L / 2 + i[d] * h();
  return p;
}

Point TorusGrid::freq(size_t j) const {
  auto i = unflatten(j);
  Point p{0, 0, 0};
  for (int d = 0; d < n; ++d) p[d] = dxi() * (i[d] < N / 2 ? i[d] : i[d] - N);
  return p;
}

size_t TorusGrid::nearest_node(const Point& p) const {
  std::array<int, 3> i{0, 0, 0};
  for (int d = 0; d < n; ++d) i[d] = static_cast<int>(std::lround((p[d] + L / 2) / h()));
  return flatten(i);
}

GridField::GridField(const TorusGrid& g, std::vector<cplx> vals) : grid(g), v(std::move(vals)) {
  if (v.size() != g.size()) fail(ErrorKind::GridMismatch, "field size does not match grid");
}

GridField GridField::from_function(const TorusGrid& g, const std::function<cplx(const Point&)>& f) {
  GridField u(g);
  for (size_t j = 0; j < u.size(); ++j) u[j] = f(g.node(j));
  return u;
}

GridField GridField::delta(const TorusGrid& g) {
  GridField u(g);
  u[g.nearest_node({0, 0, 0})] = 1.0 / g.cell();
  return u;
}

GridField& GridField::operator+=(const GridField& o) {
  if (grid != o.grid) fail(ErrorKind::GridMismatch, "fields on different grids");
  for (size_t j = 0; j < v.size(); ++j) v[j] += o.v[j];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  if (grid != o.grid) fail(ErrorKind::GridMismatch, "fields on different grids");
  for (size_t j = 0; j < v.size(); ++j) v[j] -= o.v[j];
  return *this;
}

GridField& GridField::operator*=(cplx c) {
  for (auto& z : v) z *= c;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(cplx c, GridField a) { return a *= c; }

GridField pointwise(const GridField& a, const GridField& b) {
  if (a.grid != b.grid) fail(ErrorKind::GridMismatch, "fields on different grids");
  GridField r(a.grid);
  for (size_t j = 0; j < r.size(); ++j) r[j] = a[j] * b[j];
  return r;
}

NetField NetField::from_expr(const TorusGrid& g, const EpsGrid& e, const Expr& ex) {
  NetField nf(g, e);
  for (size_t k = 0; k < e.size(); ++k)
    for (size_t j = 0; j < g.size(); ++j) nf.f[k][j] = ex.eval({e[k], g.node(j)});
  return nf;
}

namespace {
inline double parity(const TorusGrid& g, size_t j) {
  auto i = g.unflatten(j);
  return ((i[0] + i[1] + i[2]) & 1) ? -1.0 : 1.0;
}
}  // namespace

std::vector<cplx> spectrum(const GridField& u) {
  const TorusGrid& g = u.grid;
  std::vector<cplx> w(g.size());
  fft(g, u.v.data(), w.data(), -1);
  const double c = g.cell();
  for (size_t j = 0; j < w.size(); ++j) w[j] *= c * parity(g, j);
  return w;
}

GridField from_spectrum(const TorusGrid& g, const std::vector<cplx>& w) {
  if (w.size() != g.size()) fail(ErrorKind::GridMismatch, "spectrum size does not match grid");
  std::vector<cplx> t(w.size());
  for (size_t j = 0; j < w.size(); ++j) t[j] = w[j] * parity(g, j);
  GridField u(g);
  fft(g, t.data(), u.v.data(), +1);
  const double c = 1.0 / std::pow(g.L, g.n);
  for (auto& z : u.v) z *= c;
  return u;
}

double l2_norm(const GridField& u) {
  double s = 0;
  for (auto& z : u.v) s += std::norm(z);
  return std::sqrt(s * u.grid.cell());
}

double l2_norm_on(const GridField& u, const std::vector<char>& mask) {
  double s = 0;
  for (size_t j = 0; j < u.size(); ++j)
    if (mask[j]) s += std::norm(u[j]);
  return std::sqrt(s * u.grid.cell());
}

cplx inner(const GridField& a, const GridField& b) {
  if (a.grid != b.grid) fail(ErrorKind::GridMismatch, "fields on different grids");
  cplx s = 0;
  for (size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
  return s * a.grid.cell();
}

std::vector<cplx> tabulate_symbol(const TorusGrid& g, const std::function<cplx(const Point&)>& s,
                                  const Point& theta) {
  std::vector<cplx> m(g.size());
  for (size_t j = 0; j < m.size(); ++j) {
    Point xi = g.freq(j);
    for (int d = 0; d < 3; ++d) xi[d] += theta[d];
    m[j] = s(xi);
  }
  return m;
}

GridField multiply_spectrum(const GridField& u, const std::vector<cplx>& m) {
  std::vector<cplx> w = spectrum(u);
  for (size_t j = 0; j < w.size(); ++j) w[j] *= m[j];
  return from_spectrum(u.grid, w);
}

GridField fourier_multiplier(const GridField& u, const std::function<cplx(const Point&)>& sym, const Point& theta) {
  return multiply_spectrum(u, tabulate_symbol(u.grid, sym, theta));
}

GridField convolve(const GridField& u1, const GridField& u2) {
  if (u1.grid != u2.grid) fail(ErrorKind::GridMismatch, "fields on different grids");
  std::vector<cplx> a = spectrum(u1), b = spectrum(u2);
  for (size_t j = 0; j < a.size(); ++j) a[j] *= b[j];
  return from_spectrum(u1.grid, a);
}

GridField spectral_derivative(const GridField& u, const std::array<int, 3>& alpha) {
  const TorusGrid& g = u.grid;
  std::vector<cplx> w = spectrum(u);
  for (size_t j = 0; j < w.size(); ++j) {
    Point xi = g.freq(j);
    auto i = g.unflatten(j);
    cplx f = 1.0;
    for (int d = 0; d < g.n; ++d) {
      if (alpha[d] == 0) continue;
      // odd derivatives of the Nyquist mode are dropped (keeps real fields real)
      if ((alpha[d] & 1) && i[d] == g.N / 2) f = 0.0;
      f *= std::pow(cplx(0, xi[d]), alpha[d]);
    }
    w[j] *= f;
  }
  return from_spectrum(g, w);
}

cplx interpolate(const GridField& u, const Point& x) {
  const TorusGrid& g = u.grid;
  std::vector<cplx> w = spectrum(u);
  cplx s = 0;
  for (size_t j = 0; j < w.size(); ++j) {
    Point xi = g.freq(j);
    double ph = 0;
    for (int d = 0; d < g.n; ++d) ph += xi[d] * x[d];
    s += w[j] * std::polar(1.0, ph);
  }
  return s / std::pow(g.L, g.n);
}

GridField to_origin_layout(const GridField& u) {
  const TorusGrid& g = u.grid;
  GridField r(g);
  for (size_t j = 0; j < u.size(); ++j) {
    auto i = g.unflatten(j);
    for (int d = 0; d < g.n; ++d) i[d] -= g.N / 2;
    r[g.flatten(i)] = u[j];
  }
  return r;
}

// ---- weights ----

WeightFn WeightFn::one() {
  WeightFn w;
  w.k = [](const Point&) { return 1.0; };
  w.is_power = true;
  w.s = 0;
  return w;
}

WeightFn WeightFn::japanese(double s) {
  WeightFn w;
  w.k = [s](const Point& xi) { return std::pow(1 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], s / 2); };
  w.C = 1;
  w.N = std::abs(s);
  w.name = "<xi>^" + std::to_string(s);
  w.is_power = true;
  w.s = s;
  return w;
}

bool check_certificate(const WeightFn& k, int n, double slack) {
  std::vector<Point> pts{{0, 0, 0}};
  std::vector<Point> dirs;
  for (int i = 0; i < 16; ++i) {
    double t = 2 * kPi * i / 16;
    Point d{std::cos(t), n >= 2 ? std::sin(t) : 0.0, 0};
    if (n == 1) d = {i % 2 ? -1.0 : 1.0, 0, 0};
    if (n == 3) d = {std::cos(t) * 0.8, std::sin(t) * 0.8, (i % 2 ? 0.6 : -0.6)};
    dirs.push_back(d);
  }
  for (int e = -1; e <= 3; ++e)
    for (auto& d : dirs) {
      double r = std::pow(10.0, e);
      pts.push_back({r * d[0], r * d[1], r * d[2]});
    }
  for (auto& xi : pts)
    for (auto& eta : pts) {
      Point s{xi[0] + eta[0], xi[1] + eta[1], xi[2] + eta[2]};
      double bound = std::pow(1 + k.C * norm(xi, n), k.N) * k(eta);
      if (k(s) > bound * (1 + slack)) return false;
    }
  return true;
}

std::vector<double> tabulate(const WeightFn& k, const TorusGrid& g, const Point& theta) {
  std::vector<double> t(g.size());
  for (size_t j = 0; j < t.size(); ++j) {
    Point xi = g.freq(j);
    for (int d = 0; d < 3; ++d) xi[d] += theta[d];
    t[j] = k(xi);
  }
  return t;
}

double peetre_sup(double r, double s) {
  double q = (2 + r * r + r * std::sqrt(r * r + 4)) / 2;
  return std::pow(q, std::abs(s) / 2);
}

namespace {
// lattice points eta = dxi * m, |eta| <= R
std::vector<Point> lattice_ball(const TorusGrid& g, double R) {
  std::vector<Point> out;
  int M = static_cast<int>(std::floor(R / g.dxi()));
  int M1 = M, M2 = g.n >= 2 ? M : 0, M3 = g.n >= 3 ? M : 0;
  for (int a = -M1; a <= M1; ++a)
    for (int b = -M2; b <= M2; ++b)
      for (int c = -M3; c <= M3; ++c) {
        Point p{a * g.dxi(), b * g.dxi(), c * g.dxi()};
        if (norm(p, g.n) <= R) out.push_back(p);
      }
  return out;
}
}  // namespace

double m_k_lattice(const WeightFn& k, const TorusGrid& g, const Point& xi, double R) {
  double best = 0;
  for (auto& eta : lattice_ball(g, R)) {
    Point s{xi[0] + eta[0], xi[1] + eta[1], xi[2] + eta[2]};
    best = std::max(best, k(s) / k(eta));
  }
  return best;
}

WeightFn m_k(const WeightFn& k, const TorusGrid& g) {
  WeightFn w;
  if (k.is_power) {
    double s = k.s;
    w.k = [s](const Point& xi) { return peetre_sup(std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]), s); };
    w.name = "M(" + k.name + ")";
    w.C = 1;
    w.N = std::abs(s);
    w.is_power = false;
    return w;
  }
  double R = g.dxi() * (g.N / 2);
  WeightFn kk = k;
  TorusGrid gg = g;
  w.k = [kk, gg, R](const Point& xi) { return m_k_lattice(kk, gg, xi, R); };
  w.name = "M(" + k.name + ")";
  w.C = k.C;
  w.N = k.N;
  return w;
}

WeightFn k_nu(const WeightFn& k, double nu, const TorusGrid& g) {
  if (!(nu > 0)) fail(ErrorKind::InvalidArgument, "k_nu needs nu > 0");
  // window: e^{-nu r}(1+C r)^N < 1 beyond R can never beat eta = 0
  double R = 40.0 / nu;
  if (k.N == 0) {
    R = 0;
  } else {
    double lastbad = 0;
    for (double r = 0; r <= 40.0 / nu; r += g.dxi() / 4)
      if (-nu * r + k.N * std::log1p(k.C * r) >= 0) lastbad = r;
    R = std::min(R, lastbad + g.dxi());
  }
  auto ball = lattice_ball(g, R);
  WeightFn w;
  WeightFn kk = k;
  int n = g.n;
  w.k = [kk, ball, nu, n](const Point& xi) {
    double best = 0;
    for (auto& eta : ball) {
      Point s{xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
      best = std::max(best, std::exp(-nu * norm(eta, n)) * kk(s));
    }
    return best;
  };
  w.C = k.C;
  w.N = k.N;
  w.name = k.name + "_nu" + std::to_string(nu);
  return w;
}

// ---- norms ----

double bpk_norm_hat(const TorusGrid& g, const std::vector<cplx>& w, double p, const std::vector<double>& ktab) {
  if (!(p >= 1)) fail(ErrorKind::InvalidArgument, "p must lie in [1, inf]");
  if (std::isinf(p)) {
    double m = 0;
    for (size_t j = 0; j < w.size(); ++j) m = std::max(m, ktab[j] * std::abs(w[j]));
    return m;
  }
  double s = 0;
  for (size_t j = 0; j < w.size(); ++j) s += std::pow(ktab[j] * std::abs(w[j]), p);
  return std::pow(s / std::pow(g.L, g.n), 1.0 / p);
}

double bpk_norm(const GridField& u, double p, const WeightFn& k, const Point& theta) {
  return bpk_norm_hat(u.grid, spectrum(u), p, tabulate(k, u.grid, theta));
}

double sobolev_norm(const GridField& u, double s, const Point& theta) {
  return bpk_norm(u, 2.0, WeightFn::japanese(s), theta);
}

// ---- cutoffs ----

double torus_distance(const TorusGrid& g, const Point& a, const Point& b) {
  double s = 0;
  for (int d = 0; d < g.n; ++d) {
    double t = std::fmod(a[d] - b[d], g.L);
    if (t > g.L / 2) t -= g.L;
    if (t < -g.L / 2) t += g.L;
    s += t * t;
  }
  return std::sqrt(s);
}

GridField cutoff(const TorusGrid& g, const Point& x0, double delta) {
  if (!(delta > 0)) fail(ErrorKind::InvalidArgument, "cutoff radius must be positive");
  if (2 * delta >= g.L / 2) fail(ErrorKind::DeltaTooLarge, "support 2*delta does not fit in half a period");
  GridField u(g);
  for (size_t j = 0; j < u.size(); ++j) u[j] = plateau(torus_distance(g, g.node(j), x0) / delta);
  return u;
}

std::vector<char> ball_mask(const TorusGrid& g, const Point& x0, double r) {
  std::vector<char> m(g.size());
  for (size_t j = 0; j < m.size(); ++j) m[j] = torus_distance(g, g.node(j), x0) < r;
  return m;
}

std::string field_csv(const GridField& u) {
  std::ostringstream os;
  os.precision(17);
  const int n = u.grid.n;
  for (int d = 0; d < n; ++d) os << "x" << d + 1 << ",";
  os << "re,im\n";
  for (size_t j = 0; j < u.size(); ++j) {
    Point x = u.grid.node(j);
    for (int d = 0; d < n; ++d) os << x[d] << ",";
    os << u[j].real() << "," << u[j].imag() << "\n";
  }
  return os.str();
}

std::string spectrum_csv(const GridField& u) {
  std::ostringstream os;
  os.precision(17);
  const int n = u.grid.n;
  auto w = spectrum(u);
  for (int d = 0; d < n; ++d) os << "xi" << d + 1 << ",";
  os << "re,im\n";
  for (size_t j = 0; j < w.size(); ++j) {
    Point xi = u.grid.freq(j);
    for (int d = 0; d < n; ++d) os << xi[d] << ",";
    os << w[j].real() << "," << w[j].imag() << "\n";
  }
  return os.str();
}

}  // namespace gcs
