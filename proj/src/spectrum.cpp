#include "gfc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include <json.hpp>

namespace gfc {

namespace {

constexpr double kPi = std::numbers::pi;

// |p(e^{i theta})|^2 for a real-coefficient polynomial, evaluated without
// forming p and conjugating: equals sum_j sum_k p_j p_k cos((j-k) theta).
// Horner on the complex value is fine except near exact zeros, where the
// squared-magnitude form below is exact for the linear factors we care about.
double poly_sqmag(const std::vector<double>& p, double theta) {
  std::complex<double> z(std::cos(theta), std::sin(theta));
  std::complex<double> acc(0.0, 0.0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return std::norm(acc);
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> autocov_on_grid(const NoiseSpectrum& spec, int max_lag, int n) {
  std::vector<double> s = sample_grid(spec, n);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> hat;
  fft.fwd(hat, s);
  // theta_k = -pi + 2 pi k / n, so the j-th Fourier coefficient of the grid
  // samples is (-1)^j * DFT_j / n.
  std::vector<double> gamma(max_lag + 1);
  for (int j = 0; j <= max_lag; ++j) {
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    gamma[j] = sign * hat[j].real() / n;
  }
  return gamma;
}

}  // namespace

Arma1Spectrum::Arma1Spectrum(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha >= -1.0 && alpha <= 1.0))
    throw std::invalid_argument("channel spec: alpha: alpha out of [-1,1]");
  if (!(beta > -1.0 && beta < 1.0))
    throw std::invalid_argument("channel spec: beta: beta out of (-1,1)");
}

double Arma1Spectrum::evaluate(double theta) const {
  // |1 + a e^{i theta}|^2 = 1 + 2 a cos(theta) + a^2, exact at the zeros.
  double c = std::cos(theta);
  double numv = 1.0 + alpha * (2.0 * c + alpha);
  double denv = 1.0 + beta * (2.0 * c + beta);
  return std::max(numv, 0.0) / denv;
}

RationalSpectrum::RationalSpectrum(std::vector<double> num_, std::vector<double> den_, double gain_)
    : num(std::move(num_)), den(std::move(den_)), gain(gain_) {
  if (num.empty()) throw std::invalid_argument("channel spec: num: empty numerator");
  if (den.empty()) throw std::invalid_argument("channel spec: den: empty denominator");
  if (!(gain > 0.0)) throw std::invalid_argument("channel spec: gain: must be positive");
  double dmax = 0.0;
  for (double d : den) dmax = std::max(dmax, std::abs(d));
  if (dmax == 0.0) throw std::invalid_argument("channel spec: den: zero denominator");
  double dmin = std::numeric_limits<double>::infinity();
  constexpr int kCheckGrid = 4096;
  for (int k = 0; k < kCheckGrid; ++k) {
    double theta = -kPi + 2.0 * kPi * k / kCheckGrid;
    dmin = std::min(dmin, poly_sqmag(den, theta));
  }
  if (dmin < 1e-16 * dmax * dmax)
    throw std::invalid_argument("channel spec: den: root on (or too close to) the unit circle");
}

double RationalSpectrum::evaluate(double theta) const {
  return gain * poly_sqmag(num, theta) / poly_sqmag(den, theta);
}

GridSpectrum::GridSpectrum(std::vector<double> values_) : values(std::move(values_)) {
  int n = static_cast<int>(values.size());
  if (n < 8 || !is_power_of_two(n))
    throw std::invalid_argument("channel spec: values: grid size must be a power of two >= 8");
  for (int i = 0; i < n; ++i)
    if (!(values[i] >= 0.0))
      throw std::invalid_argument("channel spec: values: negative spectral value at index " +
                                  std::to_string(i));
}

double GridSpectrum::evaluate(double theta) const {
  int n = size();
  double u = (theta + kPi) / (2.0 * kPi) * n;
  double fl = std::floor(u);
  int i0 = static_cast<int>(fl) % n;
  if (i0 < 0) i0 += n;
  double frac = u - fl;
  int i1 = (i0 + 1) % n;
  return values[i0] * (1.0 - frac) + values[i1] * frac;
}

double evaluate(const NoiseSpectrum& spec, double theta) {
  if (!(theta >= -kPi && theta <= kPi))
    throw std::invalid_argument("evaluate: theta outside [-pi, pi]");
  return std::visit([theta](const auto& s) { return s.evaluate(theta); }, spec);
}

std::vector<double> sample_grid(const NoiseSpectrum& spec, int n) {
  if (n < 8) throw std::invalid_argument("sample_grid: grid size must be >= 8");
  std::vector<double> out(n);
  std::visit(
      [&](const auto& s) {
        for (int k = 0; k < n; ++k) out[k] = s.evaluate(-kPi + 2.0 * kPi * k / n);
      },
      spec);
  return out;
}

Autocovariance autocovariance(const NoiseSpectrum& spec, int max_lag, int n) {
  if (max_lag < 0) throw std::invalid_argument("autocovariance: max_lag must be >= 0");
  if (n < 4 * std::max(max_lag, 2))
    throw std::invalid_argument("autocovariance: grid size must be >= 4*max_lag");
  Autocovariance out;
  out.gamma = autocov_on_grid(spec, max_lag, n);
  std::vector<double> fine = autocov_on_grid(spec, max_lag, 2 * n);
  for (int j = 0; j <= max_lag; ++j)
    out.doubling_delta = std::max(out.doubling_delta, std::abs(out.gamma[j] - fine[j]));
  out.resolution_warning = out.doubling_delta > 1e-9 * std::max(1.0, out.gamma[0]);
  return out;
}

double log_integral(const NoiseSpectrum& spec, int n) {
  std::vector<double> s = sample_grid(spec, n);
  double smax = *std::max_element(s.begin(), s.end());
  if (smax <= 0.0) throw std::runtime_error("log_integral: degenerate spectrum");
  double acc = 0.0;
  for (double v : s) acc += std::log(std::max(v, kLogClip));
  return acc / n;
}

NoiseSpectrum spectrum_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("channel spec: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("channel spec: type: missing or not a string");
  std::string type = j["type"].get<std::string>();
  auto need_number = [&](const char* field) -> double {
    if (!j.contains(field) || !j[field].is_number())
      throw std::invalid_argument(std::string("channel spec: ") + field + ": missing or not a number");
    return j[field].get<double>();
  };
  auto need_array = [&](const char* field) -> std::vector<double> {
    if (!j.contains(field) || !j[field].is_array())
      throw std::invalid_argument(std::string("channel spec: ") + field + ": missing or not an array");
    std::vector<double> out;
    for (const auto& v : j[field]) {
      if (!v.is_number())
        throw std::invalid_argument(std::string("channel spec: ") + field + ": non-numeric entry");
      out.push_back(v.get<double>());
    }
    return out;
  };
  if (type == "arma1") return Arma1Spectrum(need_number("alpha"), need_number("beta"));
  if (type == "rational")
    return RationalSpectrum(need_array("num"), need_array("den"), need_number("gain"));
  if (type == "sampled") return GridSpectrum(need_array("values"));
  throw std::invalid_argument("channel spec: type: unknown type tag '" + type + "'");
}

std::string spectrum_to_json(const NoiseSpectrum& spec) {
  nlohmann::json j;
  if (const auto* a = std::get_if<Arma1Spectrum>(&spec)) {
    j["type"] = "arma1";
    j["alpha"] = a->alpha;
    j["beta"] = a->beta;
  } else if (const auto* r = std::get_if<RationalSpectrum>(&spec)) {
    j["type"] = "rational";
    j["num"] = r->num;
    j["den"] = r->den;
    j["gain"] = r->gain;
  } else {
    const auto& g = std::get<GridSpectrum>(spec);
    j["type"] = "sampled";
    j["values"] = g.values;
  }
  return j.dump();
}

}  // namespace gfc
