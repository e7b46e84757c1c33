#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfc/filter.hpp"
#include "gfc/spectrum.hpp"

namespace gfc {

// n-block input law: message covariance K_V (symmetric PSD) plus feedback
// matrix B (strictly lower triangular, exact zeros on and above the
// diagonal).
struct BlockStrategy {
  int n = 0;
  Eigen::MatrixXd kv;
  Eigen::MatrixXd b;

  BlockStrategy() = default;
  BlockStrategy(Eigen::MatrixXd kv_, Eigen::MatrixXd b_);
};

struct BlockRate {
  double rate = 0.0;   // nats per symbol
  double power = 0.0;  // per-symbol average of tr(K_V + B K_Z B')
};

struct OptimizeOptions {
  int restarts = 8;  // start 0 is B = 0, the rest are random
  int max_iters = 300;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int max_n = 64;
  // Additional starting points evaluated alongside the seeded restarts
  // (e.g. a block-doubled solution from n/2 to warm-start 2n runs).
  std::vector<BlockStrategy> extra_inits;
};

struct BlockResult {
  double rate = 0.0;
  double power = 0.0;
  BlockStrategy strategy;
  int iterations = 0;
  bool converged = false;
};

// Symmetric Toeplitz matrix of the first n autocovariances with a ridge of
// 1e-12 * gamma_0 on the diagonal; throws if the result is still not
// positive definite.
Eigen::MatrixXd noise_covariance(const NoiseSpectrum& spec, int n, int grid = kDefaultGrid);

// rate = (1/2n) [logdet(K_V + (B+I) K_Z (B+I)') - logdet K_Z] via Cholesky.
BlockRate evaluate_block_rate(const BlockStrategy& strategy, const Eigen::MatrixXd& kz);

/// Coordinate ascent on the n-block objective under tr(K_V + B K_Z B') <= nP:
// the K_V step water-fills the eigenvalues of (B+I) K_Z (B+I)' exactly; the
// B step takes projected gradient steps with backtracking.  The objective is
// nondecreasing across accepted iterations; the best restart is returned and
// is a lower bound on the n-block feedback capacity.
BlockResult optimize(const NoiseSpectrum& spec, int n, double P, const OptimizeOptions& opts = {});

/// Finite-block form of a stationary filter strategy: B becomes the lower
// triangular Toeplitz matrix of the impulse response b_1..b_{n-1} and
// K_V = epsilon * I.  The resulting power is reported, not forced to P.
BlockStrategy truncated_stationary_strategy(const CausalFilter& filter, int n, double epsilon);

/// JSON schema: {"n":n,"kv":[[...],...],"b":[[...],...]}.
BlockStrategy strategy_from_json(const std::string& text);
std::string strategy_to_json(const BlockStrategy& strategy);

}  // namespace gfc
