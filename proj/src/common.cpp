#include "gcs/common.hpp"

namespace gcs {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Task: return "TaskError";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadT: return "BadT";
    case ErrorKind::DegenerateSymbol: return "DegenerateSymbol";
    case ErrorKind::WeightVanishes: return "WeightVanishes";
    case ErrorKind::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorKind::NoViableShift: return "NoViableShift";
    case ErrorKind::WrongShape: return "WrongShape";
    case ErrorKind::NoContraction: return "NoContraction";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::ProfileFails: return "ProfileFails";
    case ErrorKind::RemainderNotSmoothing: return "RemainderNotSmoothing";
    case ErrorKind::AdjointDegenerate: return "AdjointDegenerate";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  size_t n = x.size();
  if (n == 0) return f;
  if (n == 1) {
    f.intercept = y[0];
    return f;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double r = 0;
  for (size_t i = 0; i < n; ++i) {
    double e = y[i] - f.intercept - f.slope * x[i];
    r += e * e;
  }
  f.rms = std::sqrt(r / n);
  return f;
}

}  // namespace gcs
