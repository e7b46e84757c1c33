#pragma once

#include <optional>

#include "gfc/filter.hpp"
#include "gfc/spectrum.hpp"

namespace gfc {

// Candidate feedback strategy in spectral form: message spectrum S_V >= 0
// (absent means identically zero) plus a strictly causal feedback filter B.
struct VariationalCandidate {
  std::optional<NoiseSpectrum> sv;
  CausalFilter b;
};

struct ObjectiveValue {
  double rate = 0.0;   // (1/2pi) int (1/2) log((S_V + |1+B|^2 S_Z)/S_Z) d theta
  double power = 0.0;  // (1/2pi) int (S_V + |B|^2 S_Z) d theta
};

ObjectiveValue eval_objective(const VariationalCandidate& cand, const NoiseSpectrum& sz,
                              int n = kDefaultGrid);

struct CertificateTolerances {
  double power = 1e-8;       // |feedback power - P|
  double lambda = 1e-8;      // slack in lambda <= essinf |1+B|^2 S_Z
  double anticausal = 1e-8;  // residual relative to the largest coefficient
};

struct CertificateReport {
  double power = 0.0;      // (1/2pi) int |B|^2 S_Z d theta
  double power_gap = 0.0;  // |power - P|
  double lambda_used = 0.0;
  double essinf_value = 0.0;     // grid essinf of |1+B|^2 S_Z
  double anticausal_residual = 0.0;  // max |positive-lag Fourier coefficient|
  double residual_scale = 0.0;       // largest |coefficient| overall, for the relative test
  bool pass = false;
};

// Checks the sufficient optimality condition for (S_V = 0, B): the feedback
// power equals P, some lambda <= essinf |1+B|^2 S_Z exists, and
// lambda/(1+B(e^{-i theta})) - B(e^{i theta}) S_Z(e^{i theta}) is anticausal
// (positive-lag Fourier coefficients vanish, checked up to lag N/2).
//
// When lambda is not supplied it is fitted by least squares over the
// positive-lag coefficients (the certificate function is linear in lambda).
// The grid essinf -- the largest value the inequality allows -- is reported
// alongside, but it is not the fitted default: for ARMA(1) optimal filters
// the anticausality condition pins lambda strictly below the essinf, and
// using the essinf leaves an O(1e-2) residual.
CertificateReport verify_sufficient_condition(const CausalFilter& b, const NoiseSpectrum& sz,
                                              double P, std::optional<double> lambda = std::nullopt,
                                              int n = kDefaultGrid,
                                              const CertificateTolerances& tol = {});

// Maximin rate of filter b: the best causal one-step predictor of the
// composite process attains the Szego log-integral, giving
//   (1/2) [log_integral(|1+B|^2 S_Z) - log_integral(S_Z)].
// The predictor-form filter convention (1 - sum a_k e^{ik theta}) maps to the
// B convention used here by negating the filter.
double maximin_rate(const CausalFilter& b, const NoiseSpectrum& sz, int n = kDefaultGrid);

}  // namespace gfc
