#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcs {

using cplx = std::complex<double>;

// Points in R^n for n <= 3. Unused trailing entries stay zero.
using Point = std::array<double, 3>;

constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
  Parse,
  Task,
  GridMismatch,
  NotInvertible,
  DimensionMismatch,
  BadT,
  DegenerateSymbol,
  WeightVanishes,
  DeltaTooLarge,
  NoViableShift,
  WrongShape,
  NoContraction,
  Diverged,
  ProfileFails,
  RemainderNotSmoothing,
  AdjointDegenerate,
  IllConditioned,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

// Kernels that exist in two flavours take this switch; Serial is the
// reference path used by the equivalence tests and the benchmark.
enum class Exec { Serial, Parallel };

inline double norm(const Point& p, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

inline double japanese(double r) { return std::sqrt(1.0 + r * r); }

// Least squares line y = c0 + c1 x. Returns {c0, c1, rms residual}.
struct LineFit {
  double intercept = 0, slope = 0, rms = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gcs
