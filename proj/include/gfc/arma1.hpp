#pragma once

#include <optional>

#include "gfc/filter.hpp"

namespace gfc {

// Closed-form feedback-capacity solution for the ARMA(1) noise channel.
//
// x0 is the unique root in (0,1) of
//   P x^2 (1 + sigma beta x)^2 = (1 - x^2)(1 + sigma alpha x)^2,
// capacity = -log x0, and the optimal feedback filter is
//   B(z) = y z (1 + beta z) / ((1 + alpha z)(1 - sigma x0 z))
// with y = ((x0^2 - 1)/(sigma x0)) * (1 + sigma alpha x0)/(1 + sigma beta x0).
struct Arma1Solution {
  double x0 = 1.0;
  double capacity = 0.0;  // nats
  double sigma = 1.0;     // +1 if beta >= alpha else -1
  double y = 0.0;
  double implied_power = 0.0;  // y^2 / (1 - x0^2), equals P identically
  // Absent when |alpha| = 1: the filter would have a pole on the unit
  // circle, so only the capacity value is provided there.
  std::optional<CausalFilter> filter;
};

// P = 0 returns the degenerate solution (x0 = 1, capacity 0, zero filter);
// negative P is rejected.  alpha in [-1,1], beta in (-1,1).
Arma1Solution solve_x0(double P, double alpha, double beta);

// AR(1) noise is the alpha = 0 special case.
double ar1_capacity(double P, double beta);

}  // namespace gfc
