#pragma once

#include <cstdint>
#include <vector>

namespace gfc {

// Channel and power parameters for the linear feedback coding scheme on
// ARMA(1) noise.  The scheme needs |alpha| < 1 (stable inverse filtering).
struct SchemeParams {
  double P = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Per-step second moments of the scheme, index i holds step k = i+1:
//   power[i] = E X_k^2
//   mse[i]   = E (V - Vhat_k)^2        (V ~ N(0,1), Vhat_k linear MMSE)
//   ratio[i] = mse_k / mse_{k-1}       (mse_0 = 1)
//   rate[i]  = -log(mse_k) / (2k)
struct CodingTrace {
  std::vector<double> power, mse, ratio, rate;
};

/// Exact jointly-Gaussian trace with no sampling: the message and the
// stationary ARMA(1) noise state evolve through a 3x3 covariance recursion
// carried on rescaled variables, so no entry grows or decays geometrically;
// mse is accumulated in log space.  Throws if the covariance loses positive
// semidefiniteness beyond roundoff.
CodingTrace exact_trace(const SchemeParams& params, int n_max);

/// Reference-sequence diagnostic: d[i] holds d_k for k = i+1 (d_1 is NaN, the
// sequence starts at k = 2) and mse_bound[i] the minimum achievable
// E(V - linear combination of Y'_2..Y'_k)^2, with mse_bound_1 = 1 (empty
// conditioning set).  Always mse_k <= mse_bound_k.
struct ReferenceSequence {
  std::vector<double> d, mse_bound;
};

ReferenceSequence reference_sequence(const SchemeParams& params, int n_max);

/// Monte Carlo PAM experiment: rate in nats (the constellation has
// ceil(e^{n rate}) points on [-1,1]), horizon n, independent seeded trials.
struct PamExperiment {
  double rate = 0.0;
  int n = 20;
  long trials = 10000;
  std::uint64_t seed = 0;
};

struct PamResult {
  double pe = 0.0;            // empirical error fraction
  double ci_low = 0.0;        // Wilson 95% interval
  double ci_high = 0.0;
  double c0_fit = 0.0;        // fitted constant of the erfc error bound (a
                              // diagnostic; fitted from pe, or from ci_high
                              // when no errors were observed)
  double err_std = 0.0;       // exact std of the estimation error, from the
                              // noise covariance of the decoder's estimate
  long errors = 0;
  long trials = 0;
};

// Trial t draws its own RNG stream from (seed, t), so any execution order
// reproduces the same result.  Decoding picks the nearest constellation
// point to the minimum-variance unbiased linear estimate at horizon n.
PamResult pam_simulate(const PamExperiment& exp, const SchemeParams& params);

}  // namespace gfc
