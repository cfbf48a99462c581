#include "gcs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "gcs/torus.hpp"

namespace gcs {

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(const TorusGrid& g, int sign) {
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto key = std::make_tuple(g.n, g.N, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  int dims[3] = {g.N, g.N, g.N};
  std::vector<cplx> a(g.size()), b(g.size());
  fftw_plan p = fftw_plan_dft(g.n, dims, reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) fail(ErrorKind::InvalidArgument, "FFTW could not build a plan");
  c.plans.emplace(key, p);
  return p;
}

}  // namespace

void fft(const TorusGrid& g, const cplx* in, cplx* out, int sign) {
  fftw_plan p = plan_for(g, sign);
  if (in == out) {
    std::vector<cplx> tmp(in, in + g.size());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()), reinterpret_cast<fftw_complex*>(out));
    return;
  }
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)), reinterpret_cast<fftw_complex*>(out));
}

}  // namespace gcs
