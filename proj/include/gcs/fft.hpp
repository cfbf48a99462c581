#pragma once

#include "gcs/common.hpp"

namespace gcs {

struct TorusGrid;

// Unnormalised n-d DFT over an N^n row-major array; sign -1 forward, +1 backward.
// Plans are cached per shape; execution is safe from several threads.
void fft(const TorusGrid& g, const cplx* in, cplx* out, int sign);

}  // namespace gcs
