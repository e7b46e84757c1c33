#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gfc/arma1.hpp"
#include "gfc/cover_pombra.hpp"
#include "oracles.hpp"

using namespace gfc;

namespace {

Eigen::MatrixXd random_psd(int n, std::mt19937_64& eng, double scale) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(eng);
  return scale * (a * a.transpose()) / n;
}

Eigen::MatrixXd random_strict_lower(int n, std::mt19937_64& eng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) b(i, j) = gauss(eng);
  return b;
}

}  // namespace

TEST_CASE("noise covariance is the Toeplitz matrix of the autocovariances") {
  auto kz = noise_covariance(Arma1Spectrum(0.5, -0.3), 6);
  auto expected = oracle::gamma_arma1(0.5, -0.3, 5);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(kz(i, j) == doctest::Approx(expected[std::abs(i - j)]).epsilon(1e-8));
}

TEST_CASE("noise covariance stays positive definite for long memory at n = 64") {
  auto kz = noise_covariance(Arma1Spectrum(0.0, 0.9), 64);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kz, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("block rate agrees with an eigenvalue-based log-determinant") {
  std::mt19937_64 eng(42);
  auto kz = noise_covariance(Arma1Spectrum(0.4, 0.2), 8);
  for (int trial = 0; trial < 5; ++trial) {
    BlockStrategy s(random_psd(8, eng, 1.0), random_strict_lower(8, eng, 0.4));
    auto br = evaluate_block_rate(s, kz);
    Eigen::MatrixXd a = s.b + Eigen::MatrixXd::Identity(8, 8);
    Eigen::MatrixXd m = a * kz * a.transpose() + s.kv;
    double expected = 0.5 * (oracle::logdet_eig(m) - oracle::logdet_eig(kz)) / 8;
    CHECK(br.rate == doctest::Approx(expected).epsilon(1e-10));
    CHECK(br.power ==
          doctest::Approx((s.kv.trace() + (s.b * kz * s.b.transpose()).trace()) / 8));
  }
}

TEST_CASE("white block strategy without feedback gives half log(1+P)") {
  int n = 4;
  double P = 2.0;
  auto kz = noise_covariance(Arma1Spectrum(0.0, 0.0), n);
  BlockStrategy s(P * Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(n, n));
  auto br = evaluate_block_rate(s, kz);
  CHECK(br.rate == doctest::Approx(0.5 * std::log1p(P)).epsilon(1e-9));
  CHECK(br.power == doctest::Approx(P).epsilon(1e-12));
}

TEST_CASE("feedback through a pure filter with no message carries zero rate") {
  std::mt19937_64 eng(3);
  int n = 8;
  auto kz = noise_covariance(Arma1Spectrum(0.0, 0.5), n);
  BlockStrategy s(Eigen::MatrixXd::Zero(n, n), random_strict_lower(n, eng, 0.5));
  auto br = evaluate_block_rate(s, kz);
  CHECK(std::abs(br.rate) < 1e-10);
  CHECK(br.power > 0.0);
}

TEST_CASE("strategy validation rejects malformed inputs") {
  Eigen::MatrixXd kv = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);

  Eigen::MatrixXd bad_b = b;
  bad_b(0, 2) = 0.1;  // upper-triangular entry
  CHECK_THROWS_AS((BlockStrategy(kv, bad_b)), std::invalid_argument);

  Eigen::MatrixXd asym = kv;
  asym(0, 1) = 0.2;
  CHECK_THROWS_AS((BlockStrategy(asym, b)), std::invalid_argument);

  Eigen::MatrixXd negdef = -kv;
  CHECK_THROWS_AS((BlockStrategy(negdef, b)), std::invalid_argument);

  CHECK_THROWS_AS((BlockStrategy(Eigen::MatrixXd::Identity(3, 2), b)), std::invalid_argument);
  CHECK_THROWS_AS((BlockStrategy(kv, Eigen::MatrixXd::Zero(2, 2))), std::invalid_argument);
}

TEST_CASE("ascent gradient matches central finite differences") {
  std::mt19937_64 eng(11);
  int n = 8;
  auto kz = noise_covariance(Arma1Spectrum(0.5, -0.3), n);
  Eigen::MatrixXd kv = random_psd(n, eng, 0.8) + 0.2 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = random_strict_lower(n, eng, 0.3);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  auto objective = [&](const Eigen::MatrixXd& bb) {
    Eigen::MatrixXd a = bb + id;
    Eigen::MatrixXd m = a * kz * a.transpose() + kv;
    return oracle::logdet_eig(m);
  };
  Eigen::MatrixXd a = b + id;
  Eigen::MatrixXd m = a * kz * a.transpose() + kv;
  Eigen::MatrixXd grad = 2.0 * (m.llt().solve(a * kz));

  double h = 1e-5;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
      e(i, j) = h;
      double fd = (objective(b + e) - objective(b - e)) / (2.0 * h);
      CHECK(fd == doctest::Approx(grad(i, j)).epsilon(1e-5));
    }
}

TEST_CASE("optimizer reaches the white-noise optimum") {
  auto res = optimize(Arma1Spectrum(0.0, 0.0), 4, 3.0);
  CHECK(res.rate == doctest::Approx(0.5 * std::log(4.0)).epsilon(1e-9));
  CHECK(res.power <= 3.0 + 1e-9);
  CHECK(res.converged);
  CHECK(res.iterations > 0);
}

TEST_CASE("optimizer rates grow with block length and stay under the capacity") {
  double cap = solve_x0(1.0, 0.0, 0.5).capacity;
  double prev = 0.0;
  for (int n : {2, 4, 8}) {
    auto res = optimize(Arma1Spectrum(0.0, 0.5), n, 1.0);
    CHECK(res.rate >= prev - 1e-6);
    CHECK(res.rate <= cap + 1e-6);
    CHECK(res.power <= 1.0 + 1e-9);
    prev = res.rate;
  }
  CHECK(prev > 0.9 * cap);  // n = 8 already lands within 10% of the limit
}

TEST_CASE("optimizer output satisfies its own power budget exactly at the optimum") {
  auto res = optimize(Arma1Spectrum(0.0, 0.5), 6, 1.0);
  double used = (res.strategy.kv.trace() +
                 (res.strategy.b * noise_covariance(Arma1Spectrum(0.0, 0.5), 6) *
                  res.strategy.b.transpose())
                     .trace()) /
                6.0;
  CHECK(used == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("optimizer is deterministic for a fixed seed") {
  OptimizeOptions opts;
  opts.seed = 123;
  auto r1 = optimize(Arma1Spectrum(0.0, 0.5), 4, 1.0, opts);
  auto r2 = optimize(Arma1Spectrum(0.0, 0.5), 4, 1.0, opts);
  CHECK(r1.rate == r2.rate);
  CHECK(r1.strategy.b == r2.strategy.b);
}

TEST_CASE("warm starts are accepted and never lower the result") {
  NoiseSpectrum sz = Arma1Spectrum(0.0, 0.5);
  auto cold = optimize(sz, 8, 1.0);

  OptimizeOptions opts;
  auto filt = solve_x0(1.0, 0.0, 0.5).filter;
  opts.extra_inits.push_back(truncated_stationary_strategy(*filt, 8, 1e-4));
  opts.extra_inits.push_back(truncated_stationary_strategy(*filt, 4, 1e-4));  // wrong n: skipped
  auto warm = optimize(sz, 8, 1.0, opts);
  CHECK(warm.rate >= cold.rate - 1e-9);
}

TEST_CASE("single-step block has no room for feedback") {
  auto res = optimize(Arma1Spectrum(0.0, 0.0), 1, 3.0);
  CHECK(res.rate == doctest::Approx(0.5 * std::log(4.0)).epsilon(1e-9));
  CHECK(res.strategy.b(0, 0) == 0.0);
}

TEST_CASE("truncated stationary strategy lays the impulse response on the diagonals") {
  auto filt = solve_x0(1.0, 0.0, 0.5).filter;
  auto s = truncated_stationary_strategy(*filt, 6, 1e-4);
  auto taps = filt->impulse_response(5);
  for (int i = 1; i < 6; ++i)
    for (int j = 0; j < i; ++j) CHECK(s.b(i, j) == doctest::Approx(taps[i - j - 1]).epsilon(1e-14));
  CHECK(s.kv == 1e-4 * Eigen::MatrixXd::Identity(6, 6));
  CHECK_THROWS_AS(truncated_stationary_strategy(*filt, 6, 0.0), std::invalid_argument);
}

TEST_CASE("truncated stationary strategies approach the capacity from below") {
  auto sol = solve_x0(1.0, 0.0, 0.5);
  auto kz32 = noise_covariance(Arma1Spectrum(0.0, 0.5), 32);
  auto kz64 = noise_covariance(Arma1Spectrum(0.0, 0.5), 64);
  double r32 = evaluate_block_rate(truncated_stationary_strategy(*sol.filter, 32, 1e-4), kz32).rate;
  double r64 = evaluate_block_rate(truncated_stationary_strategy(*sol.filter, 64, 1e-4), kz64).rate;
  CHECK(r32 < r64);
  CHECK(r64 < sol.capacity + 1e-6);
  CHECK(r64 > 0.8 * sol.capacity);
}

TEST_CASE("strategy JSON round trip is lossless") {
  std::mt19937_64 eng(9);
  BlockStrategy s(random_psd(4, eng, 1.0), random_strict_lower(4, eng, 0.5));
  BlockStrategy back = strategy_from_json(strategy_to_json(s));
  CHECK(back.n == 4);
  CHECK(back.kv == s.kv);
  CHECK(back.b == s.b);
}

TEST_CASE("strategy JSON error shapes") {
  CHECK_THROWS_WITH_AS(strategy_from_json("[]"), doctest::Contains("strategy spec"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(strategy_from_json(R"({"n":2,"kv":[[1,0]],"b":[[0,0],[0,0]]})"),
                       doctest::Contains("kv"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(strategy_from_json(R"({"n":2,"kv":[[1,0],[0,1]],"b":[[0,0],["x",0]]})"),
                       doctest::Contains("non-numeric"), std::invalid_argument);
  // Structurally valid JSON but an invalid strategy (upper entry set).
  CHECK_THROWS_WITH_AS(strategy_from_json(R"({"n":2,"kv":[[1,0],[0,1]],"b":[[0,1],[0,0]]})"),
                       doctest::Contains("strictly lower"), std::invalid_argument);
}

TEST_CASE("optimizer argument validation") {
  CHECK_THROWS_AS(optimize(Arma1Spectrum(0.0, 0.0), 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(optimize(Arma1Spectrum(0.0, 0.0), 65, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(optimize(Arma1Spectrum(0.0, 0.0), 4, -1.0), std::invalid_argument);
}
