#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "gfc/spectrum.hpp"
#include "oracles.hpp"

using namespace gfc;

namespace {
const double kPi = std::acos(-1.0);

double direct_arma1(double a, double b, double theta) {
  std::complex<double> e(std::cos(theta), std::sin(theta));
  return std::norm(1.0 + a * e) / std::norm(1.0 + b * e);
}
}  // namespace

TEST_CASE("arma1 spectrum matches the direct complex evaluation") {
  Arma1Spectrum s(0.5, -0.3);
  for (double theta : {-3.0, -1.2, 0.0, 0.7, 2.9, kPi}) {
    CHECK(s.evaluate(theta) == doctest::Approx(direct_arma1(0.5, -0.3, theta)).epsilon(1e-13));
  }
}

TEST_CASE("arma1 spectrum is even and wraps theta = pi") {
  Arma1Spectrum s(-0.8, 0.6);
  for (double theta : {0.3, 1.1, 2.5}) CHECK(s.evaluate(theta) == doctest::Approx(s.evaluate(-theta)));
  CHECK(s.evaluate(kPi) == doctest::Approx(s.evaluate(-kPi)));
}

TEST_CASE("white spectrum is identically one") {
  NoiseSpectrum s = Arma1Spectrum(0.0, 0.0);
  for (double v : sample_grid(s, 64)) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("arma1 parameter validation") {
  CHECK_THROWS_AS(Arma1Spectrum(1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Arma1Spectrum(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Arma1Spectrum(0.0, -1.0), std::invalid_argument);
  CHECK_NOTHROW(Arma1Spectrum(1.0, 0.0));  // unit-circle zero in the numerator is fine
}

TEST_CASE("rational spectrum evaluates gain * |num|^2/|den|^2") {
  RationalSpectrum s({1.0, 0.5}, {1.0, -0.2}, 2.0);
  for (double theta : {-2.0, 0.4, 1.7}) {
    std::complex<double> e(std::cos(theta), std::sin(theta));
    double expected = 2.0 * std::norm(1.0 + 0.5 * e) / std::norm(1.0 - 0.2 * e);
    CHECK(s.evaluate(theta) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("rational spectrum rejects non-positive gain and circle roots") {
  CHECK_THROWS_AS(RationalSpectrum({1.0}, {1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RationalSpectrum({1.0}, {1.0}, -1.0), std::invalid_argument);
  // 1 + z has a root on the unit circle.
  CHECK_THROWS_AS(RationalSpectrum({1.0}, {1.0, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("grid spectrum interpolates its samples periodically") {
  GridSpectrum s({1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0});
  int n = s.size();
  for (int k = 0; k < n; ++k) {
    double theta = -kPi + 2.0 * kPi * k / n;
    CHECK(s.evaluate(theta) == doctest::Approx(s.values[k]).epsilon(1e-12));
  }
  // Midpoint between the first two samples.
  double mid = -kPi + kPi / n;
  CHECK(s.evaluate(mid) == doctest::Approx(1.5).epsilon(1e-12));
  // theta = pi wraps around to the first sample.
  CHECK(s.evaluate(kPi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid spectrum validation") {
  CHECK_THROWS_AS(GridSpectrum(std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpectrum(std::vector<double>(12, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(GridSpectrum(std::vector<double>{1, 1, 1, 1}), std::invalid_argument);
  std::vector<double> neg(8, 1.0);
  neg[3] = -0.1;
  CHECK_THROWS_AS((GridSpectrum(neg)), std::invalid_argument);
}

TEST_CASE("autocovariance matches the closed ARMA(1) form") {
  auto expected = oracle::gamma_arma1(0.5, -0.3, 5);
  auto ac = autocovariance(Arma1Spectrum(0.5, -0.3), 5);
  REQUIRE(ac.gamma.size() == 6);
  for (int k = 0; k <= 5; ++k) CHECK(ac.gamma[k] == doctest::Approx(expected[k]).epsilon(1e-10));
  CHECK_FALSE(ac.resolution_warning);
  CHECK(ac.doubling_delta < 1e-9);
}

TEST_CASE("autocovariance of an MA(1) spectrum truncates after lag one") {
  auto ac = autocovariance(Arma1Spectrum(0.5, 0.0), 3);
  CHECK(ac.gamma[0] == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(ac.gamma[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(ac.gamma[2]) < 1e-10);
  CHECK(std::abs(ac.gamma[3]) < 1e-10);
}

TEST_CASE("autocovariance flags unresolved narrow peaks") {
  // beta = 0.999 puts a width ~1e-3 peak at theta = pi; a 64-point grid cannot
  // see it and the doubling check reports that.
  auto ac = autocovariance(Arma1Spectrum(0.0, 0.999), 4, 64);
  CHECK(ac.resolution_warning);
  CHECK(ac.doubling_delta > 1e-3);
}

TEST_CASE("autocovariance argument validation") {
  CHECK_THROWS_AS(autocovariance(Arma1Spectrum(0.0, 0.0), -1), std::invalid_argument);
  CHECK_THROWS_AS(autocovariance(Arma1Spectrum(0.0, 0.0), 10, 16), std::invalid_argument);
}

TEST_CASE("log integral vanishes for monic ARMA spectra") {
  CHECK(std::abs(log_integral(Arma1Spectrum(0.5, -0.3))) < 1e-12);
  CHECK(std::abs(log_integral(Arma1Spectrum(-0.9, 0.7))) < 1e-12);
}

TEST_CASE("log integral picks up a constant gain exactly") {
  RationalSpectrum s({1.0}, {1.0}, 4.0);
  CHECK(log_integral(s) == doctest::Approx(std::log(4.0)).epsilon(1e-11));
}

TEST_CASE("log integral rejects an identically zero spectrum") {
  CHECK_THROWS_AS(log_integral(GridSpectrum(std::vector<double>(8, 0.0))), std::runtime_error);
}

TEST_CASE("channel JSON round trip preserves evaluations") {
  std::vector<NoiseSpectrum> specs;
  specs.push_back(Arma1Spectrum(0.4, -0.2));
  specs.push_back(RationalSpectrum({1.0, 0.3}, {1.0, -0.5}, 1.7));
  specs.push_back(GridSpectrum({1.0, 2.0, 3.0, 2.5, 2.0, 1.5, 1.2, 1.1}));
  for (const auto& s : specs) {
    NoiseSpectrum back = spectrum_from_json(spectrum_to_json(s));
    for (double theta : {-2.5, -0.3, 0.0, 1.9}) {
      CHECK(evaluate(back, theta) == doctest::Approx(evaluate(s, theta)).epsilon(1e-14));
    }
  }
}

TEST_CASE("channel JSON error shapes") {
  CHECK_THROWS_WITH_AS(spectrum_from_json("not json"),
                       doctest::Contains("channel spec"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(spectrum_from_json(R"({"type":"fourier"})"),
                       doctest::Contains("unknown type tag"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(spectrum_from_json(R"({"type":"arma1","alpha":0.2})"),
                       doctest::Contains("beta"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      spectrum_from_json(R"({"type":"sampled","values":[1,1,1,-2,1,1,1,1]})"),
      doctest::Contains("negative spectral value at index 3"), std::invalid_argument);
}
