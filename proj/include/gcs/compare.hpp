#pragma once

#include <string>
#include <vector>

#include "gcs/symbols.hpp"

namespace gcs {

enum class Status { Holds, Fails, Indeterminate };
const char* status_name(Status s);

struct Witness {
  double eps = 0;
  Point xi{0, 0, 0};
  double ratio = 0;
};

struct CompareOptions {
  SampleOptions samples{-1, 4, 4, 64};
  ClassifyOptions classify;
  // slope of log sup-ratio against log|xi| over the outer shells
  double bounded_slope = 0.1;
  double unbounded_slope = 0.3;
  int max_decade = 12;  // widest radius tried while the ratio keeps growing
  Exec exec = Exec::Parallel;
};

struct ComparisonReport {
  GenNumber lambda;
  ModeratenessReport lambda_class;
  double xi_growth = 0;  // worst shell slope over eps
  Status status = Status::Indeterminate;
  bool verdict = false;  // status == Holds
  std::vector<Witness> witnesses;  // argmax per eps
  size_t sample_count = 0;
  int max_decade = 4;  // outer radius 10^max_decade actually scanned
};

struct DominationReport {
  GenNumber lambda;
  std::vector<double> t;
  std::vector<double> C_of_t;   // max_eps S(t,eps)/S(1,eps)
  std::vector<double> raw_sup;  // max_eps S(t,eps)
  double gamma = 0;             // C(t) ~ t^{-gamma}
  bool decay_ok = false;
  bool uniform_ok = false;      // the eps-uniform quantifier check
  std::vector<std::pair<double, double>> a_to_b;
  size_t uniform_checks = 0;
  ComparisonReport stronger;
  bool verdict = false;
};

struct EllipticityReport {
  double c = 0;
  double a = 0;
  bool verdict = false;
  GenNumber inf_net;
  ModeratenessReport inf_class;
  std::vector<Point> worst_direction;
};

// sup_xi weight_Q / weight_P <= lambda_eps with lambda moderate
ComparisonReport is_stronger(const ConstSymbol& Q, const ConstSymbol& P, const CompareOptions& o = {});
DominationReport dominates(const ConstSymbol& Q, const ConstSymbol& P, const CompareOptions& o = {});
EllipticityReport is_g_elliptic(const ConstSymbol& P, int sphere_samples = 720);
EllipticityReport is_principal_type(const ConstSymbol& P, int sphere_samples = 720);

struct SuiteCheck {
  std::string name;
  bool expected = true;
  bool observed = false;
  bool ok() const { return expected == observed; }
};
struct PropertySuiteReport {
  std::vector<SuiteCheck> checks;
  bool all_ok() const;
};
// Algebraic closure checks for P against a list of weaker candidates.
PropertySuiteReport property_suite(const ConstSymbol& P, const std::vector<ConstSymbol>& Qs,
                                   const CompareOptions& o = {});

}  // namespace gcs
