#include "gfc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include <json.hpp>

namespace gfc {

namespace {

// Drops trailing coefficients that are exactly zero (keeps at least one).
std::vector<double> strip_trailing_zeros(std::vector<double> p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  return p;
}

}  // namespace

CausalFilter::CausalFilter(std::vector<double> num_, std::vector<double> den_)
    : num(std::move(num_)), den(std::move(den_)) {
  if (num.empty() || den.empty()) throw std::invalid_argument("filter: empty coefficient list");
  if (num[0] != 0.0)
    throw std::invalid_argument("filter: not strictly causal (numerator has a z^0 term)");
  if (den[0] == 0.0) throw std::invalid_argument("filter: denominator constant term is zero");
  den = strip_trailing_zeros(std::move(den));
  if (!stable_denominator(den))
    throw std::invalid_argument("filter: denominator root on or inside the unit circle");
}

CausalFilter CausalFilter::from_impulse(const std::vector<double>& taps) {
  std::vector<double> num(taps.size() + 1, 0.0);
  std::copy(taps.begin(), taps.end(), num.begin() + 1);
  return CausalFilter(std::move(num), {1.0});
}

std::complex<double> CausalFilter::response(double theta) const {
  std::complex<double> z(std::cos(theta), std::sin(theta));
  auto horner = [&z](const std::vector<double>& p) {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  return horner(num) / horner(den);
}

std::vector<double> CausalFilter::impulse_response(int m) const {
  if (m < 0) throw std::invalid_argument("impulse_response: negative length");
  // num = den * b, solved forward: b_k = (num_k - sum_{j>=1} den_j b_{k-j}) / den_0.
  std::vector<double> b(m + 1, 0.0);
  for (int k = 0; k <= m; ++k) {
    double acc = k < static_cast<int>(num.size()) ? num[k] : 0.0;
    for (int j = 1; j < static_cast<int>(den.size()) && j <= k; ++j) acc -= den[j] * b[k - j];
    b[k] = acc / den[0];
  }
  return {b.begin() + 1, b.end()};
}

bool CausalFilter::is_zero() const {
  return std::all_of(num.begin(), num.end(), [](double c) { return c == 0.0; });
}

bool stable_denominator(const std::vector<double>& den) {
  std::vector<double> p = strip_trailing_zeros(den);
  int deg = static_cast<int>(p.size()) - 1;
  if (deg == 0) return p[0] != 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
  Eigen::VectorXcd roots = companion.eigenvalues();
  for (int i = 0; i < deg; ++i)
    if (std::abs(roots[i]) <= 1.0) return false;
  return true;
}

std::vector<double> truncated_impulse(const CausalFilter& filter, double rel_tol, int max_len) {
  std::vector<double> b = filter.impulse_response(max_len);
  double bmax = 0.0;
  for (double v : b) bmax = std::max(bmax, std::abs(v));
  if (bmax == 0.0) return {};
  int m = static_cast<int>(b.size());
  while (m > 0 && std::abs(b[m - 1]) < rel_tol * bmax) --m;
  b.resize(m);
  return b;
}

CausalFilter filter_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("filter spec: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("filter spec: not a JSON object");
  auto get_array = [&](const char* field) -> std::vector<double> {
    if (!j[field].is_array())
      throw std::invalid_argument(std::string("filter spec: ") + field + ": not an array");
    std::vector<double> out;
    for (const auto& v : j[field]) {
      if (!v.is_number())
        throw std::invalid_argument(std::string("filter spec: ") + field + ": non-numeric entry");
      out.push_back(v.get<double>());
    }
    return out;
  };
  if (j.contains("num") && j.contains("den"))
    return CausalFilter(get_array("num"), get_array("den"));
  if (j.contains("impulse")) return CausalFilter::from_impulse(get_array("impulse"));
  throw std::invalid_argument("filter spec: expected either num/den or impulse");
}

std::string filter_to_json(const CausalFilter& filter) {
  nlohmann::json j;
  j["num"] = filter.num;
  j["den"] = filter.den;
  j["impulse"] = truncated_impulse(filter);
  return j.dump();
}

}  // namespace gfc
