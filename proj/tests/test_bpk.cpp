#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gcs/torus.hpp"

using namespace gcs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridField random_field(const TorusGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0, 1);
  GridField u(g);
  for (auto& z : u.v) z = {n(rng), n(rng)};
  return u;
}

// random trigonometric polynomial with |m| <= band on every axis
GridField band_limited(const TorusGrid& g, int band, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0, 1);
  std::vector<cplx> w(g.size(), 0.0);
  for (size_t j = 0; j < g.size(); ++j) {
    auto i = g.unflatten(j);
    bool in = true;
    for (int d = 0; d < g.n; ++d) {
      int m = i[d] < g.N / 2 ? i[d] : i[d] - g.N;
      in = in && std::abs(m) <= band;
    }
    if (in) w[j] = cplx(n(rng), n(rng)) * std::pow(g.L, g.n);
  }
  return from_spectrum(g, w);
}

double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0;
  for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(Spectrum, MatchesDirectDft) {
  TorusGrid g(2, 3.0, 8);
  GridField u = random_field(g, 1);
  auto w = spectrum(u);
  for (size_t m = 0; m < g.size(); ++m) {
    Point xi = g.freq(m);
    cplx s = 0;
    for (size_t j = 0; j < g.size(); ++j) {
      Point x = g.node(j);
      s += u[j] * std::exp(cplx(0, -(xi[0] * x[0] + xi[1] * x[1])));
    }
    s *= g.cell();
    EXPECT_LE(std::abs(w[m] - s), 1e-12 * (1 + std::abs(s)));
  }
  EXPECT_LE(max_abs_diff(from_spectrum(g, w), u), 1e-13);
}

TEST(Spectrum, Parseval) {
  for (int n : {1, 2, 3}) {
    TorusGrid g(n, 2 * kPi, n == 3 ? 8 : 16);
    GridField u = random_field(g, 7 + n);
    double a = l2_norm(u), b = sobolev_norm(u, 0);
    EXPECT_NEAR(a, b, 1e-12 * a);
    EXPECT_NEAR(std::norm(inner(u, u)), std::pow(a, 4), 1e-11 * std::pow(a, 4));
  }
}

TEST(Norms, DeltaAtInfinity) {
  TorusGrid g(2, 2 * kPi, 16);
  GridField d = GridField::delta(g);
  for (double s : {-1.0, 0.0, 2.0}) {
    double expect = 0;
    for (size_t m = 0; m < g.size(); ++m) expect = std::max(expect, std::pow(1 + std::pow(norm(g.freq(m), 2), 2), s / 2));
    EXPECT_NEAR(bpk_norm(d, kInf, WeightFn::japanese(s)), expect, 1e-12 * expect);
  }
}

TEST(Norms, PlaneWave) {
  TorusGrid g(2, 2 * kPi, 16);
  Point xi0{3, -2, 0};
  GridField u = GridField::from_function(g, [&](const Point& x) { return std::exp(cplx(0, xi0[0] * x[0] + xi0[1] * x[1])); });
  for (double s : {-2.0, 0.5, 1.0}) {
    double r = sobolev_norm(u, s) / sobolev_norm(u, 0);
    EXPECT_NEAR(r, std::pow(1 + 13.0, s / 2), 1e-12 * r);
  }
  EXPECT_NEAR(sobolev_norm(u, 0), 2 * kPi, 1e-12);
}

TEST(Norms, MonotoneInWeight) {
  TorusGrid g(1, 2 * kPi, 64);
  GridField u = random_field(g, 3);
  double prev = 0;
  for (double s : {-2.0, -1.0, 0.0, 0.5, 1.0, 3.0}) {
    for (double p : {1.0, 2.0, kInf}) EXPECT_GE(bpk_norm(u, p, WeightFn::japanese(s + 0.5)), bpk_norm(u, p, WeightFn::japanese(s)));
    double v = sobolev_norm(u, s);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Norms, HomogeneousAndSubadditive) {
  TorusGrid g(2, 2 * kPi, 16);
  GridField u = random_field(g, 4), v = random_field(g, 5);
  auto k = WeightFn::japanese(1.5);
  for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
    double nu = bpk_norm(u, p, k), nv = bpk_norm(v, p, k);
    EXPECT_NEAR(bpk_norm(cplx(-2, 1) * u, p, k), std::sqrt(5.0) * nu, 1e-12 * nu);
    EXPECT_LE(bpk_norm(u + v, p, k), (nu + nv) * (1 + 1e-12));
  }
  EXPECT_THROW(bpk_norm(u, 0.5, k), Error);
}

TEST(Weights, JapaneseCertificate) {
  for (double s : {-3.0, -0.5, 1.0, 4.0}) {
    auto k = WeightFn::japanese(s);
    EXPECT_TRUE(check_certificate(k, 2));
    EXPECT_EQ(k.N, std::abs(s));
  }
}

TEST(Weights, PeetreClosedFormMatchesLattice) {
  TorusGrid g(1, 16 * kPi, 256);  // lattice step 1/8
  for (double s : {-2.0, 1.0, 3.0})
    for (double r : {1.0, 4.0, 10.0}) {
      auto k = WeightFn::japanese(s);
      double lat = m_k_lattice(k, g, {r, 0, 0}, 120), closed = peetre_sup(r, s);
      EXPECT_LE(lat, closed * (1 + 1e-12));
      EXPECT_GE(lat, 0.95 * closed) << "s " << s << " r " << r;
      EXPECT_NEAR(m_k(k, g)({r, 0, 0}), closed, 1e-14 * closed);
    }
  // M_k(0) = 1 for any weight
  EXPECT_NEAR(peetre_sup(0, 2), 1, 1e-15);
}

TEST(Weights, KNuBracketsK) {
  TorusGrid g(1, 2 * kPi, 64);
  auto k = WeightFn::japanese(2);
  for (double nu : {0.5, 1.0, 4.0}) {
    auto kn = k_nu(k, nu, g);
    // sup_r e^{-nu r} (1 + r)^2
    double amp = 0;
    for (double r = 0; r < 200; r += 1e-3) amp = std::max(amp, std::exp(-nu * r) * std::pow(1 + r, 2));
    for (double x : {0.0, 1.0, -7.0, 30.0}) {
      EXPECT_GE(kn({x, 0, 0}), k({x, 0, 0}) * (1 - 1e-14));
      EXPECT_LE(kn({x, 0, 0}), amp * k({x, 0, 0}) * (1 + 1e-12));
    }
  }
  EXPECT_THROW(k_nu(k, 0, g), Error);
}

TEST(Bounds, MultiplicationByFourierL1Weight) {
  // band limits keep phi*u alias free on the grid
  TorusGrid g(2, 2 * kPi, 32);
  GridField phi = band_limited(g, 5, 11), u = band_limited(g, 7, 12);
  for (double s : {-1.0, 0.0, 2.0}) {
    auto k = WeightFn::japanese(s);
    double phi1 = bpk_norm(phi, 1.0, m_k(k, g));
    for (double p : {1.0, 2.0, kInf})
      EXPECT_LE(bpk_norm(pointwise(phi, u), p, k), phi1 * bpk_norm(u, p, k) * (1 + 1e-12)) << "s " << s << " p " << p;
  }
}

TEST(Bounds, ConvolutionFactorises) {
  TorusGrid g(1, 2 * kPi, 64);
  GridField a = random_field(g, 21), b = random_field(g, 22);
  auto k1 = WeightFn::japanese(-1), k2 = WeightFn::japanese(2), k12 = WeightFn::japanese(1);
  for (double p : {1.0, 2.0, kInf})
    EXPECT_LE(bpk_norm(convolve(a, b), p, k12), bpk_norm(a, kInf, k1) * bpk_norm(b, p, k2) * (1 + 1e-12));
  // spectrum of the convolution is the product
  auto wa = spectrum(a), wb = spectrum(b), wc = spectrum(convolve(a, b));
  for (size_t m = 0; m < g.size(); ++m) EXPECT_LE(std::abs(wc[m] - wa[m] * wb[m]), 1e-11 * (1 + std::abs(wc[m])));
}

TEST(Cutoff, Shape) {
  TorusGrid g(2, 2 * kPi, 64);
  Point x0{3.0, -3.0, 0};  // near the corner, so the minimum image matters
  double d = 0.5;
  GridField psi = cutoff(g, x0, d);
  for (size_t j = 0; j < g.size(); ++j) {
    double r = torus_distance(g, g.node(j), x0), v = psi[j].real();
    EXPECT_GE(v, 0);
    EXPECT_LE(v, 1);
    if (r <= d) {
      EXPECT_EQ(v, 1);
    }
    if (r >= 2 * d) {
      EXPECT_EQ(v, 0);
    }
  }
  EXPECT_THROW(cutoff(g, x0, 1.7), Error);
  EXPECT_THROW(cutoff(g, x0, 0), Error);
}

TEST(Cutoff, LocalisedCoefficientIsOrderDelta) {
  // ||psi_delta (c - c(x0))||_{1} ~ delta for smooth c
  TorusGrid g(1, 2 * kPi, 512);
  GridField c = GridField::from_function(g, [](const Point& x) { return std::sin(x[0]) + 0.5 * std::sin(2 * x[0]); });
  std::vector<double> lx, ly;
  for (double d : {0.4, 0.2, 0.1, 0.05}) {
    double v = bpk_norm(pointwise(cutoff(g, {0, 0, 0}, d), c), 1.0, WeightFn::one());
    lx.push_back(std::log(d));
    ly.push_back(std::log(v));
  }
  EXPECT_GE(fit_line(lx, ly).slope, 0.9);
}

TEST(Multiplier, ComposesAndShifts) {
  TorusGrid g(2, 2 * kPi, 16);
  GridField u = random_field(g, 31);
  auto a = [](const Point& x) { return cplx(1 + x[0] * x[0], x[1]); };
  auto b = [](const Point& x) { return cplx(2, -x[0] * x[1]); };
  auto ab = [&](const Point& x) { return a(x) * b(x); };
  for (Point th : {Point{0, 0, 0}, Point{0.5, 0.25, 0}}) {
    GridField x = fourier_multiplier(fourier_multiplier(u, a, th), b, th), y = fourier_multiplier(u, ab, th);
    double scale = 0;
    for (auto& z : y.v) scale = std::max(scale, std::abs(z));
    EXPECT_LE(max_abs_diff(x, y), 1e-13 * scale);
  }
  // constant multiplier is scalar multiplication
  GridField c = fourier_multiplier(u, [](const Point&) { return cplx(3); });
  EXPECT_LE(max_abs_diff(c, cplx(3) * u), 1e-13);
}

TEST(Spectral, DerivativeAndInterpolation) {
  TorusGrid g(1, 2 * kPi, 32);
  GridField s = GridField::from_function(g, [](const Point& x) { return std::sin(3 * x[0]); });
  GridField ds = spectral_derivative(s, {1, 0, 0});
  GridField c = GridField::from_function(g, [](const Point& x) { return 3 * std::cos(3 * x[0]); });
  EXPECT_LE(max_abs_diff(ds, c), 1e-12);
  for (double x : {0.123, -2.0, 3.1}) EXPECT_NEAR(std::abs(interpolate(s, {x, 0, 0}) - std::sin(3 * x)), 0, 1e-13);
}

TEST(Grid, MismatchThrows) {
  GridField a(TorusGrid(1, 2 * kPi, 16)), b(TorusGrid(1, 2 * kPi, 32));
  EXPECT_THROW(a += b, Error);
  EXPECT_THROW(pointwise(a, b), Error);
}
