#pragma once

#include "gfc/spectrum.hpp"

namespace gfc {

struct WaterfillResult {
  double lambda = 0.0;      // water level
  double capacity = 0.0;    // nats per channel use
  double power_used = 0.0;  // (1/2pi) int max(0, lambda - S) d theta at the returned level
};

// Nonfeedback capacity by water-filling: bisects the water level lambda until
// the allocated power matches P within tol, then integrates
// (1/2) log(max(S, lambda)/S) over the grid.  P = 0 short-circuits to
// capacity 0 at lambda = essinf S.
WaterfillResult capacity_nofb(const NoiseSpectrum& spec, double P, int n = kDefaultGrid,
                              double tol = 1e-10);

}  // namespace gfc
