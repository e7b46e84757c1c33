#include "gfc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace gfc {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::complex<double>> response_grid(const CausalFilter& b, int n) {
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) out[k] = b.response(-kPi + 2.0 * kPi * k / n);
  return out;
}

}  // namespace

ObjectiveValue eval_objective(const VariationalCandidate& cand, const NoiseSpectrum& sz, int n) {
  std::vector<double> szg = sample_grid(sz, n);
  std::vector<double> svg(n, 0.0);
  if (cand.sv) {
    svg = sample_grid(*cand.sv, n);
    for (int k = 0; k < n; ++k)
      if (!(svg[k] >= 0.0)) throw std::invalid_argument("eval_objective: S_V negative on grid");
  }
  std::vector<std::complex<double>> bg = response_grid(cand.b, n);
  ObjectiveValue out;
  for (int k = 0; k < n; ++k) {
    double comp = std::norm(1.0 + bg[k]) * szg[k] + svg[k];
    out.rate += 0.5 * (std::log(std::max(comp, kLogClip)) - std::log(std::max(szg[k], kLogClip)));
    out.power += svg[k] + std::norm(bg[k]) * szg[k];
  }
  out.rate /= n;
  out.power /= n;
  return out;
}

CertificateReport verify_sufficient_condition(const CausalFilter& b, const NoiseSpectrum& sz,
                                              double P, std::optional<double> lambda, int n,
                                              const CertificateTolerances& tol) {
  std::vector<double> szg = sample_grid(sz, n);
  double szmin = *std::min_element(szg.begin(), szg.end());
  double szmax = *std::max_element(szg.begin(), szg.end());
  if (!(szmin > 1e-12 * std::max(szmax, 1.0)))
    throw std::runtime_error("verify_sufficient_condition: noise spectrum not bounded away from zero");

  std::vector<std::complex<double>> bg = response_grid(b, n);
  CertificateReport rep;
  rep.essinf_value = std::numeric_limits<double>::infinity();
  std::vector<std::complex<double>> f1(n), f2(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> onepb = 1.0 + bg[k];
    if (std::abs(onepb) < 1e-12)
      throw std::runtime_error("verify_sufficient_condition: certificate undefined (1+B vanishes)");
    // Real coefficients make B(e^{-i theta}) the conjugate of B(e^{i theta}).
    f1[k] = 1.0 / std::conj(onepb);
    f2[k] = bg[k] * szg[k];
    rep.power += std::norm(bg[k]) * szg[k];
    rep.essinf_value = std::min(rep.essinf_value, std::norm(onepb) * szg[k]);
  }
  rep.power /= n;
  rep.power_gap = std::abs(rep.power - P);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> f1hat, f2hat;
  fft.fwd(f1hat, f1);
  fft.fwd(f2hat, f2);
  // Coefficient of lag k is (-1)^k DFT_k / n; the sign is immaterial for the
  // magnitudes below and cancels in the least-squares ratio.

  if (lambda) {
    rep.lambda_used = *lambda;
  } else {
    // The certificate function is linear in lambda, so the anticausality
    // requirement has a unique least-squares witness over positive lags.
    double num = 0.0, den = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
      num += (std::conj(f1hat[k]) * f2hat[k]).real();
      den += std::norm(f1hat[k]);
    }
    rep.lambda_used = den > 1e-30 ? num / den : rep.essinf_value;
  }

  for (int k = 0; k < n; ++k) {
    double mag = std::abs(rep.lambda_used * f1hat[k] - f2hat[k]) / n;
    rep.residual_scale = std::max(rep.residual_scale, mag);
    if (k >= 1 && k <= n / 2) rep.anticausal_residual = std::max(rep.anticausal_residual, mag);
  }

  rep.pass = rep.power_gap <= tol.power &&
             rep.lambda_used <= rep.essinf_value + tol.lambda &&
             rep.anticausal_residual <= tol.anticausal * std::max(rep.residual_scale, 1e-300);
  return rep;
}

double maximin_rate(const CausalFilter& b, const NoiseSpectrum& sz, int n) {
  std::vector<double> szg = sample_grid(sz, n);
  std::vector<std::complex<double>> bg = response_grid(b, n);
  double acc_comp = 0.0, acc_noise = 0.0, comp_max = 0.0;
  for (int k = 0; k < n; ++k) {
    double comp = std::norm(1.0 + bg[k]) * szg[k];
    comp_max = std::max(comp_max, comp);
    acc_comp += std::log(std::max(comp, kLogClip));
    acc_noise += std::log(std::max(szg[k], kLogClip));
  }
  if (comp_max <= 0.0) throw std::runtime_error("maximin_rate: degenerate composite spectrum");
  return 0.5 * (acc_comp - acc_noise) / n;
}

}  // namespace gfc
