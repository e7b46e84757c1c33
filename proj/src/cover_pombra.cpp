#include "gfc/cover_pombra.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace gfc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd strict_lower(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  out.triangularView<Eigen::StrictlyLower>() = m.triangularView<Eigen::StrictlyLower>();
  return out;
}

// logdet of a symmetric positive definite matrix via Cholesky; -inf when the
// factorization fails (matrix not PD).
double logdet_spd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return kNegInf;
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// max logdet(m0 + K) over PSD K with tr K <= budget: water-fill the
// eigenvalues of m0 up to a common level.  The level's reciprocal is the
// marginal logdet value of budget, which the ascent gradient needs.
struct Waterfill {
  Eigen::MatrixXd kv;
  double level = 0.0;
};

Waterfill waterfill_cov(const Eigen::MatrixXd& m0, double budget) {
  int n = static_cast<int>(m0.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m0);
  Eigen::VectorXd w = es.eigenvalues();
  if (budget <= 0.0) return {Eigen::MatrixXd::Zero(n, n), w.minCoeff()};
  double lo = w.minCoeff(), hi = w.maxCoeff() + budget + 1.0;
  for (int it = 0; it < 200; ++it) {
    double mu = 0.5 * (lo + hi);
    double used = (mu - w.array()).max(0.0).sum();
    if (used > budget)
      hi = mu;
    else
      lo = mu;
  }
  double level = 0.5 * (lo + hi);
  Eigen::VectorXd fill = (level - w.array()).max(0.0);
  double total = fill.sum();
  if (total > 0.0) fill *= budget / total;  // land exactly on the budget
  return {es.eigenvectors() * fill.asDiagonal() * es.eigenvectors().transpose(), level};
}

struct Ascent {
  double objective = kNegInf;  // logdet(M) - logdet(K_Z), i.e. 2n * rate
  Eigen::MatrixXd kv, b;
  int iterations = 0;
  bool converged = false;
};

double block_objective(const Eigen::MatrixXd& kz, double ldz, const Eigen::MatrixXd& b,
                       const Eigen::MatrixXd& kv, Eigen::MatrixXd* m_out) {
  int n = static_cast<int>(kz.rows());
  Eigen::MatrixXd a = b + Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = a * kz * a.transpose() + kv;
  double ld = logdet_spd(m);
  if (!std::isfinite(ld)) return kNegInf;
  if (m_out) *m_out = std::move(m);
  return ld - ldz;
}

Ascent ascend(const Eigen::MatrixXd& kz, double ldz, double P, Eigen::MatrixXd b0, int max_iters,
              double tol) {
  int n = static_cast<int>(kz.rows());
  double total = n * P;
  Eigen::MatrixXd b = strict_lower(b0);
  double pb = (b * kz * b.transpose()).trace();
  if (pb > total && pb > 0.0) b *= std::sqrt(total / pb) * 0.999;

  auto id = Eigen::MatrixXd::Identity(n, n);
  auto refill = [&](const Eigen::MatrixXd& bb) {
    double used = (bb * kz * bb.transpose()).trace();
    Eigen::MatrixXd a = bb + id;
    return waterfill_cov(a * kz * a.transpose(), std::max(total - used, 0.0));
  };

  Waterfill wf = refill(b);
  Eigen::MatrixXd kv = std::move(wf.kv);
  double level = wf.level;
  Eigen::MatrixXd m;
  double obj = block_objective(kz, ldz, b, kv, &m);
  if (!std::isfinite(obj)) throw std::runtime_error("optimize: infeasible starting point");

  Ascent out;
  double step = 0.1;
  int flat_iters = 0;
  int it = 0;
  for (; it < max_iters; ++it) {
    double obj_prev = obj;
    // Gradient step on B against the envelope objective (K_V water-filled for
    // every candidate).  Power drawn into the filter costs 1/level per unit of
    // displaced K_V budget, hence the second gradient term; without it most
    // directions overshoot and backtracking stalls.
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    Eigen::MatrixXd grad = 2.0 * strict_lower(llt.solve((b + id) * kz));
    if (level > 0.0) grad -= (2.0 / level) * strict_lower(b * kz);
    bool improved = false;
    double s = step;
    for (int bt = 0; bt < 30; ++bt) {
      Eigen::MatrixXd cand = b + s * grad;
      double used = (cand * kz * cand.transpose()).trace();
      if (used > total) {
        if (total <= 0.0) break;
        cand *= std::sqrt(total / used);
      }
      Waterfill wfc = refill(cand);
      Eigen::MatrixXd mc;
      double oc = block_objective(kz, ldz, cand, wfc.kv, &mc);
      if (oc > obj + 1e-15) {
        b = std::move(cand);
        kv = std::move(wfc.kv);
        level = wfc.level;
        obj = oc;
        m = std::move(mc);
        step = s * 1.5;
        improved = true;
        break;
      }
      s *= 0.5;
    }
    if (!improved) {
      // The whole backtracking range failed; shrink and retry, giving up once
      // the step degenerates.
      if (step < 1e-14) {
        out.converged = true;
        break;
      }
      step *= 0.25;
      continue;
    }
    if (obj - obj_prev <= tol * std::max(1.0, std::abs(obj))) {
      if (++flat_iters >= 3) {
        out.converged = true;
        break;
      }
    } else {
      flat_iters = 0;
    }
  }
  out.objective = obj;
  out.kv = std::move(kv);
  out.b = std::move(b);
  out.iterations = it;
  return out;
}

}  // namespace

BlockStrategy::BlockStrategy(Eigen::MatrixXd kv_, Eigen::MatrixXd b_)
    : n(static_cast<int>(kv_.rows())), kv(std::move(kv_)), b(std::move(b_)) {
  if (kv.rows() != kv.cols() || b.rows() != b.cols() || b.rows() != kv.rows())
    throw std::invalid_argument("strategy: K_V and B must be square with matching sizes");
  if (n < 1) throw std::invalid_argument("strategy: empty block");
  if (!kv.isApprox(kv.transpose(), 1e-12))
    throw std::invalid_argument("strategy: K_V not symmetric");
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (b(i, j) != 0.0)
        throw std::invalid_argument("strategy: B not strictly lower triangular");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kv, Eigen::EigenvaluesOnly);
  double floor = -1e-10 * std::max(kv.trace() / n, 1e-300);
  if (es.eigenvalues().minCoeff() < floor)
    throw std::invalid_argument("strategy: K_V not positive semidefinite");
}

Eigen::MatrixXd noise_covariance(const NoiseSpectrum& spec, int n, int grid) {
  if (n < 1) throw std::invalid_argument("noise_covariance: block size must be >= 1");
  Autocovariance ac = autocovariance(spec, n - 1, std::max(grid, 4 * std::max(n - 1, 2)));
  Eigen::MatrixXd kz(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) kz(i, j) = ac.gamma[std::abs(i - j)];
  kz.diagonal().array() += 1e-12 * ac.gamma[0];
  if (!std::isfinite(logdet_spd(kz)))
    throw std::runtime_error("noise_covariance: spectrum resolution insufficient");
  return kz;
}

BlockRate evaluate_block_rate(const BlockStrategy& strategy, const Eigen::MatrixXd& kz) {
  int n = strategy.n;
  if (kz.rows() != n || kz.cols() != n)
    throw std::invalid_argument("evaluate_block_rate: K_Z size mismatch");
  double ldz = logdet_spd(kz);
  if (!std::isfinite(ldz))
    throw std::invalid_argument("evaluate_block_rate: K_Z not positive definite");
  Eigen::MatrixXd a = strategy.b + Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = a * kz * a.transpose() + strategy.kv;
  double ld = logdet_spd(m);
  if (!std::isfinite(ld))
    throw std::runtime_error("evaluate_block_rate: strategy output covariance not positive definite");
  BlockRate out;
  out.rate = 0.5 * (ld - ldz) / n;
  out.power = (strategy.kv.trace() + (strategy.b * kz * strategy.b.transpose()).trace()) / n;
  return out;
}

BlockResult optimize(const NoiseSpectrum& spec, int n, double P, const OptimizeOptions& opts) {
  if (n < 1) throw std::invalid_argument("optimize: block size must be >= 1");
  if (n > opts.max_n) throw std::invalid_argument("optimize: block size exceeds optimizer limit");
  if (P < 0.0) throw std::invalid_argument("optimize: negative power");
  Eigen::MatrixXd kz = noise_covariance(spec, n);
  double ldz = logdet_spd(kz);

  std::vector<Eigen::MatrixXd> inits;
  inits.push_back(Eigen::MatrixXd::Zero(n, n));
  for (int r = 1; r < opts.restarts; ++r) {
    std::mt19937_64 eng(splitmix64(opts.seed ^ (0x9E3779B97F4A7C15ULL * (r + 1))));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.2, 0.9);
    Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) b0(i, j) = gauss(eng);
    double share = unif(eng);
    double pb = (b0 * kz * b0.transpose()).trace();
    if (pb > 0.0) b0 *= std::sqrt(share * n * P / pb);
    inits.push_back(std::move(b0));
  }
  for (const auto& strat : opts.extra_inits) {
    if (strat.n == n) inits.push_back(strat.b);
  }

  Ascent best;
  for (auto& b0 : inits) {
    Ascent a = ascend(kz, ldz, P, std::move(b0), opts.max_iters, opts.tol);
    if (a.objective > best.objective) best = std::move(a);
  }

  BlockResult out;
  out.strategy = BlockStrategy(std::move(best.kv), std::move(best.b));
  BlockRate br = evaluate_block_rate(out.strategy, kz);
  out.rate = br.rate;
  out.power = br.power;
  out.iterations = best.iterations;
  out.converged = best.converged;
  return out;
}

BlockStrategy truncated_stationary_strategy(const CausalFilter& filter, int n, double epsilon) {
  if (n < 1) throw std::invalid_argument("truncated_stationary_strategy: block size must be >= 1");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("truncated_stationary_strategy: epsilon must be positive");
  std::vector<double> taps = filter.impulse_response(std::max(n - 1, 0));
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) b(i, j) = taps[i - j - 1];
  return BlockStrategy(epsilon * Eigen::MatrixXd::Identity(n, n), std::move(b));
}

BlockStrategy strategy_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("strategy spec: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("strategy spec: n: missing or not an integer");
  int n = j["n"].get<int>();
  auto get_matrix = [&](const char* field) {
    if (!j.contains(field) || !j[field].is_array() || static_cast<int>(j[field].size()) != n)
      throw std::invalid_argument(std::string("strategy spec: ") + field + ": expected " +
                                  std::to_string(n) + " rows");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& row = j[field][i];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw std::invalid_argument(std::string("strategy spec: ") + field + ": row " +
                                    std::to_string(i) + " has wrong length");
      for (int k = 0; k < n; ++k) {
        if (!row[k].is_number())
          throw std::invalid_argument(std::string("strategy spec: ") + field + ": non-numeric entry");
        m(i, k) = row[k].get<double>();
      }
    }
    return m;
  };
  return BlockStrategy(get_matrix("kv"), get_matrix("b"));
}

std::string strategy_to_json(const BlockStrategy& strategy) {
  nlohmann::json j;
  j["n"] = strategy.n;
  auto to_rows = [&](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < strategy.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < strategy.n; ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    return rows;
  };
  j["kv"] = to_rows(strategy.kv);
  j["b"] = to_rows(strategy.b);
  return j.dump();
}

}  // namespace gfc
