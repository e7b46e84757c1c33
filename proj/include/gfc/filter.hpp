#pragma once

#include <complex>
#include <string>
#include <vector>

namespace gfc {

// Strictly causal rational filter B(z) = num(z)/den(z) with real
// coefficients: num[0] == 0 (impulse response starts at lag 1) and all
// denominator roots strictly outside the unit disk.  FIR filters use
// den = {1}.
struct CausalFilter {
  std::vector<double> num{0.0};
  std::vector<double> den{1.0};

  CausalFilter() = default;
  CausalFilter(std::vector<double> num_, std::vector<double> den_);

  // Builds the FIR filter with taps b_1..b_m.
  static CausalFilter from_impulse(const std::vector<double>& taps);

  // B(e^{i theta}).
  std::complex<double> response(double theta) const;

  // b_1..b_m by polynomial long division.
  std::vector<double> impulse_response(int m) const;

  bool is_zero() const;
};

// True when every root of den(z) lies strictly outside the unit disk
// (constant denominators are stable).  Roots come from the companion
// matrix of the monic polynomial.
bool stable_denominator(const std::vector<double>& den);

// Shortest prefix b_1..b_m of the impulse response whose dropped tail
// satisfies |b_k| < rel_tol * max|b_j|; length capped at max_len.
std::vector<double> truncated_impulse(const CausalFilter& filter, double rel_tol = 1e-12,
                                      int max_len = 4096);

// JSON schema: {"num":[...],"den":[...]} for rational filters or
// {"impulse":[b1,...]} for FIR taps; emission includes all three fields.
CausalFilter filter_from_json(const std::string& text);
std::string filter_to_json(const CausalFilter& filter);

}  // namespace gfc
