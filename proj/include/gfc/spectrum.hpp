#pragma once

#include <string>
#include <variant>
#include <vector>

namespace gfc {

// Default quadrature grid size for every spectral integral.
inline constexpr int kDefaultGrid = 1 << 14;

// Integrands of log-integrals are clipped below at this value so that
// isolated spectral zeros (e.g. |alpha| = 1) stay finite on the grid.
inline constexpr double kLogClip = 1e-300;

// S(e^{i theta}) = |1 + alpha e^{i theta}|^2 / |1 + beta e^{i theta}|^2
struct Arma1Spectrum {
  double alpha = 0.0;
  double beta = 0.0;

  Arma1Spectrum(double alpha_, double beta_);
  double evaluate(double theta) const;
};

// S(e^{i theta}) = gain * |num(e^{i theta})|^2 / |den(e^{i theta})|^2 with
// real polynomial coefficients; the denominator must have no roots on the
// unit circle (checked on a grid at construction).
struct RationalSpectrum {
  std::vector<double> num;
  std::vector<double> den;
  double gain = 1.0;

  RationalSpectrum(std::vector<double> num_, std::vector<double> den_, double gain_);
  double evaluate(double theta) const;
};

// Nonnegative samples at theta_k = -pi + 2*pi*k/N.  Off-grid evaluation uses
// periodic linear interpolation between neighbouring samples.
struct GridSpectrum {
  std::vector<double> values;

  explicit GridSpectrum(std::vector<double> values_);
  double evaluate(double theta) const;
  int size() const { return static_cast<int>(values.size()); }
};

using NoiseSpectrum = std::variant<Arma1Spectrum, RationalSpectrum, GridSpectrum>;

// Accepts theta in the closed interval [-pi, pi]; theta = pi wraps to -pi.
double evaluate(const NoiseSpectrum& spec, double theta);

// Samples on theta_k = -pi + 2*pi*k/N, k = 0..N-1.
std::vector<double> sample_grid(const NoiseSpectrum& spec, int n);

struct Autocovariance {
  std::vector<double> gamma;     // gamma_0 .. gamma_max_lag
  double doubling_delta = 0.0;   // max |change| when the grid size is doubled
  bool resolution_warning = false;
};

// gamma_j = (1/2pi) int S(e^{i theta}) cos(j theta) d theta on an N-point
// grid.  The same lags are recomputed at 2N to populate the resolution
// diagnostic; the warning trips when the doubling delta exceeds
// 1e-9 * max(1, gamma_0).
Autocovariance autocovariance(const NoiseSpectrum& spec, int max_lag, int n = kDefaultGrid);

// (1/2pi) int log S(e^{i theta}) d theta by grid quadrature, integrand
// clipped at log(kLogClip).  Throws for an identically zero spectrum.
double log_integral(const NoiseSpectrum& spec, int n = kDefaultGrid);

// JSON channel schema:
//   {"type":"arma1","alpha":a,"beta":b}
//   {"type":"rational","num":[...],"den":[...],"gain":g}
//   {"type":"sampled","values":[...]}
NoiseSpectrum spectrum_from_json(const std::string& text);
std::string spectrum_to_json(const NoiseSpectrum& spec);

}  // namespace gfc
