#include "gfc/arma1.hpp"

#include <cmath>
#include <stdexcept>

namespace gfc {

namespace {

double quartic(double P, double alpha, double beta, double sigma, double x) {
  double a = 1.0 + sigma * alpha * x;
  double b = 1.0 + sigma * beta * x;
  return P * x * x * b * b - (1.0 - x * x) * a * a;
}

}  // namespace

Arma1Solution solve_x0(double P, double alpha, double beta) {
  if (P < 0.0) throw std::invalid_argument("solve_x0: negative power");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw std::invalid_argument("solve_x0: alpha out of [-1,1]");
  if (!(beta > -1.0 && beta < 1.0)) throw std::invalid_argument("solve_x0: beta out of (-1,1)");

  Arma1Solution sol;
  sol.sigma = (beta >= alpha) ? 1.0 : -1.0;
  if (P == 0.0) {
    sol.filter = CausalFilter();  // zero filter
    return sol;
  }

  if (alpha == beta) {
    // White noise: the ARMA factors cancel and the quartic collapses to
    // P x^2 = 1 - x^2.
    sol.x0 = 1.0 / std::sqrt(1.0 + P);
  } else {
    // quartic(0) = -1 < 0 and quartic(1) = P (1 + sigma beta)^2 > 0, so the
    // root is bracketed; bisect down to one ulp.
    double lo = 0.0, hi = 1.0;
    if (!(quartic(P, alpha, beta, sol.sigma, hi) > 0.0))
      throw std::runtime_error("solve_x0: root not bracketed");
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (quartic(P, alpha, beta, sol.sigma, mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    sol.x0 = 0.5 * (lo + hi);
  }

  sol.capacity = -std::log(sol.x0);
  double sx = sol.sigma * sol.x0;
  sol.y = ((sol.x0 * sol.x0 - 1.0) / sx) * (1.0 + sol.sigma * alpha * sol.x0) /
          (1.0 + sol.sigma * beta * sol.x0);
  sol.implied_power = sol.y * sol.y / (1.0 - sol.x0 * sol.x0);

  if (std::abs(alpha) < 1.0) {
    // (1 + alpha z)(1 - sigma x0 z) = 1 + (alpha - sigma x0) z - alpha sigma x0 z^2.
    std::vector<double> num{0.0, sol.y, sol.y * beta};
    std::vector<double> den{1.0, alpha - sx, -alpha * sx};
    while (num.size() > 1 && num.back() == 0.0) num.pop_back();
    while (den.size() > 1 && den.back() == 0.0) den.pop_back();
    sol.filter = CausalFilter(std::move(num), std::move(den));
  }
  return sol;
}

double ar1_capacity(double P, double beta) { return solve_x0(P, 0.0, beta).capacity; }

}  // namespace gfc
