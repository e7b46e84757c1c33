#include "gfc/waterfilling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gfc {

namespace {

double allocated_power(const std::vector<double>& s, double lambda) {
  double acc = 0.0;
  for (double v : s) acc += std::max(0.0, lambda - v);
  return acc / s.size();
}

}  // namespace

WaterfillResult capacity_nofb(const NoiseSpectrum& spec, double P, int n, double tol) {
  if (P < 0.0) throw std::invalid_argument("capacity_nofb: negative power");
  if (!(tol > 0.0)) throw std::invalid_argument("capacity_nofb: tolerance must be positive");
  std::vector<double> s = sample_grid(spec, n);
  double essinf = *std::min_element(s.begin(), s.end());
  double smax = *std::max_element(s.begin(), s.end());

  WaterfillResult out;
  if (P == 0.0) {
    out.lambda = essinf;
    return out;
  }

  // allocated_power is continuous and nondecreasing in lambda with value 0 at
  // essinf and >= P at smax + P + 1, so bisection always brackets a solution.
  double lo = essinf, hi = smax + P + 1.0;
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    lambda = 0.5 * (lo + hi);
    double pm = allocated_power(s, lambda);
    if (std::abs(pm - P) <= tol) break;
    if (pm < P)
      lo = lambda;
    else
      hi = lambda;
  }
  out.lambda = lambda;
  out.power_used = allocated_power(s, out.lambda);
  if (std::abs(out.power_used - P) > tol)
    throw std::runtime_error("capacity_nofb: bisection failed to match the power budget");

  double acc = 0.0;
  for (double v : s)
    acc += 0.5 * (std::log(std::max(v, out.lambda)) - std::log(std::max(v, kLogClip)));
  out.capacity = acc / n;
  return out;
}

}  // namespace gfc
