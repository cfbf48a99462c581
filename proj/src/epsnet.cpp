#include "gcs/epsnet.hpp"

#include <algorithm>

namespace gcs {

EpsGrid::EpsGrid() : EpsGrid(dyadic(24)) {}

EpsGrid::EpsGrid(std::vector<double> values) : v_(std::move(values)) {
  if (v_.empty()) fail(ErrorKind::InvalidArgument, "eps grid is empty");
  for (size_t i = 0; i < v_.size(); ++i) {
    if (!(v_[i] > 0.0 && v_[i] <= 1.0)) fail(ErrorKind::InvalidArgument, "eps samples must lie in (0,1]");
    if (i > 0 && !(v_[i] < v_[i - 1])) fail(ErrorKind::InvalidArgument, "eps samples must be strictly decreasing");
  }
}

EpsGrid EpsGrid::dyadic(int kmax) {
  std::vector<double> v;
  for (int k = 0; k <= kmax; ++k) v.push_back(std::ldexp(1.0, -k));
  return EpsGrid(std::move(v));
}

EpsGrid EpsGrid::geometric(double ratio, int count) {
  if (!(ratio > 0 && ratio < 1) || count < 1) fail(ErrorKind::InvalidArgument, "bad geometric eps grid");
  std::vector<double> v;
  double e = 1.0;
  for (int k = 0; k < count; ++k, e *= ratio) v.push_back(e);
  return EpsGrid(std::move(v));
}

void require_same_grid(const EpsGrid& a, const EpsGrid& b) {
  if (a != b) fail(ErrorKind::GridMismatch, "generalized numbers live on different eps grids");
}

GenNumber::GenNumber(EpsGrid grid, std::vector<cplx> samples) : grid_(std::move(grid)), s_(std::move(samples)) {
  if (s_.size() != grid_.size()) fail(ErrorKind::GridMismatch, "sample count does not match eps grid");
  for (auto& z : s_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail(ErrorKind::InvalidArgument, "net sample is not finite");
}

GenNumber GenNumber::constant(const EpsGrid& g, cplx c) { return GenNumber(g, std::vector<cplx>(g.size(), c)); }

GenNumber GenNumber::from_expr(const EpsGrid& g, const Expr& e) {
  if (e.depends_on_x()) fail(ErrorKind::InvalidArgument, "generalized number expression depends on x: " + e.str());
  if (e.depends_on_xi()) fail(ErrorKind::InvalidArgument, "generalized number expression depends on xi: " + e.str());
  std::vector<cplx> s(g.size());
  for (size_t i = 0; i < g.size(); ++i) s[i] = e.eval({g[i], {0, 0, 0}});
  return GenNumber(g, std::move(s));
}

GenNumber GenNumber::from_expr(const EpsGrid& g, std::string_view src) { return from_expr(g, Expr::parse(src)); }

GenNumber GenNumber::abs() const {
  GenNumber r = *this;
  for (auto& z : r.s_) z = std::abs(z);
  return r;
}

GenNumber GenNumber::conj() const {
  GenNumber r = *this;
  for (auto& z : r.s_) z = std::conj(z);
  return r;
}

GenNumber GenNumber::pow(double q) const {
  GenNumber r = *this;
  for (auto& z : r.s_) z = (z.imag() == 0 && z.real() >= 0) ? cplx(std::pow(z.real(), q)) : std::pow(z, q);
  return r;
}

bool GenNumber::is_zero() const {
  return std::all_of(s_.begin(), s_.end(), [](const cplx& z) { return z == 0.0; });
}

GenNumber GenNumber::operator-() const {
  GenNumber r = *this;
  for (auto& z : r.s_) z = -z;
  return r;
}

GenNumber& GenNumber::operator*=(cplx c) {
  for (auto& z : s_) z *= c;
  return *this;
}

namespace {
template <class F>
GenNumber zip(const GenNumber& a, const GenNumber& b, F f) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> s(a.size());
  for (size_t i = 0; i < s.size(); ++i) s[i] = f(a[i], b[i]);
  return GenNumber(a.grid(), std::move(s));
}
}  // namespace

GenNumber operator+(const GenNumber& a, const GenNumber& b) { return zip(a, b, std::plus<cplx>()); }
GenNumber operator-(const GenNumber& a, const GenNumber& b) { return zip(a, b, std::minus<cplx>()); }
GenNumber operator*(const GenNumber& a, const GenNumber& b) { return zip(a, b, std::multiplies<cplx>()); }
GenNumber operator/(const GenNumber& a, const GenNumber& b) {
  require_same_grid(a.grid(), b.grid());
  return a * invert(b);
}
GenNumber operator*(cplx c, const GenNumber& a) {
  GenNumber r = a;
  r *= c;
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Negligible: return "Negligible";
    case Verdict::Moderate: return "Moderate";
    case Verdict::SlowScale: return "SlowScale";
    case Verdict::NotModerate: return "NotModerate";
  }
  return "?";
}

ModeratenessReport classify(const GenNumber& u, const ClassifyOptions& opt) {
  ModeratenessReport rep;
  rep.tested_order = opt.negligible_order;
  const EpsGrid& g = u.grid();
  const size_t K = u.size();
  if (K == 0) fail(ErrorKind::InvalidArgument, "classify of an empty net");

  bool any_zero = false;
  for (size_t i = 0; i < K; ++i) any_zero |= (u[i] == 0.0);
  for (int q = 1; q <= 8; ++q) {
    double c = 0;
    for (size_t i = 0; i < K; ++i) c = std::max(c, std::pow(std::abs(u[i]), q) * g[i]);
    rep.slow_scale_c[q - 1] = c;
  }

  std::vector<double> lx, ly;
  double lower = -kInfExponent;
  for (size_t i = g.tail_begin(); i < K; ++i) {
    double a = std::abs(u[i]);
    if (a == 0.0) {
      lower = kInfExponent;
      continue;
    }
    lx.push_back(std::log10(g[i]));
    ly.push_back(std::log10(a));
    if (g[i] < 1.0) lower = std::max(lower, std::log(a) / std::log(g[i]));
  }
  if (lower == -kInfExponent) lower = 0;  // tail is just eps = 1

  if (lx.empty()) {
    // all-zero net, or a tail that underflowed to zero
    rep.verdict = Verdict::Negligible;
    rep.fitted_exponent = kInfExponent;
    rep.all_zero = u.is_zero();
    rep.lower_exponent = kInfExponent;
    rep.strictly_nonzero = false;
    return rep;
  }

  LineFit f = fit_line(lx, ly);
  rep.fitted_exponent = f.slope;
  rep.fit_residual = f.rms;
  rep.lower_exponent = lower;

  if (f.slope > opt.negligible_order) {
    rep.verdict = Verdict::Negligible;
  } else if (f.slope >= -opt.max_order && f.rms <= opt.residual_tol) {
    rep.verdict = Verdict::Moderate;
    // every power q <= 8 grows at most like 1/eps
    if (f.slope < -0.01 && 8 * f.slope + 1 >= -0.02) rep.verdict = Verdict::SlowScale;
  } else if (f.slope >= -opt.max_order && lx.size() >= 6) {
    // A poor fit alone is scatter (resonances, sampling); super-polynomial growth
    // shows up as a slope that keeps steepening from one half of the tail to the next.
    size_t h = lx.size() / 2;
    LineFit a = fit_line({lx.begin(), lx.begin() + h}, {ly.begin(), ly.begin() + h});
    LineFit b = fit_line({lx.begin() + h, lx.end()}, {ly.begin() + h, ly.end()});
    rep.verdict = a.slope - b.slope <= opt.steepening_tol ? Verdict::Moderate : Verdict::NotModerate;
  } else {
    rep.verdict = Verdict::NotModerate;
  }
  rep.strictly_nonzero = !any_zero && lower <= opt.r_max && rep.verdict != Verdict::Negligible;
  return rep;
}

double valuation(const GenNumber& u, const ClassifyOptions& opt) { return classify(u, opt).fitted_exponent; }

double ultra_norm(const GenNumber& u, const ClassifyOptions& opt) {
  double v = valuation(u, opt);
  return v == kInfExponent ? 0.0 : std::exp(-v);
}

bool equal_in_g(const GenNumber& a, const GenNumber& b, const ClassifyOptions& opt) {
  return classify(a - b, opt).verdict == Verdict::Negligible;
}

GenNumber invert(const GenNumber& u, const ClassifyOptions& opt) {
  const EpsGrid& g = u.grid();
  std::vector<cplx> s(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    double a = std::abs(u[i]);
    if (a == 0.0)
      fail(ErrorKind::NotInvertible, "net vanishes at eps = " + std::to_string(g[i]));
    if (i >= g.tail_begin() && std::log(a) < opt.r_max * std::log(g[i]))
      fail(ErrorKind::NotInvertible, "net drops below eps^" + std::to_string(opt.r_max) +
                                         " at eps = " + std::to_string(g[i]));
    s[i] = 1.0 / u[i];
  }
  return GenNumber(g, std::move(s));
}

}  // namespace gcs
