#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eppv/eppv.hpp"
#include "eppv/permutation.hpp"
#include "eppv/random.hpp"
#include "eppv/test_result.hpp"

namespace eppv {

struct Covariates {
  Eigen::VectorXd z1;
  Eigen::VectorXd z2;
};

/// z1 = w1 - 1 and z2 = (w2 - 1) * z1^d with w1, w2 independent Exp(1) and
/// z1^0 = 1. For d = -1 an observation with |z1| < 1e-12 is redrawn.
Covariates generate_covariates(std::size_t n, int d, Rng& rng);

/// y_i = 1{u_i <= invlogit(beta0 + beta1 z1_i + beta2 z2_i)}.
Eigen::VectorXd generate_response(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                                  double beta0, double beta1, double beta2, Rng& rng);

struct ScenarioConfig {
  std::size_t n = 30;
  int d = 0;
  double beta0 = 0.0;
  double beta1 = 1.0;
  double beta2 = 0.0;
  std::size_t replicates = 2000;
  double alpha = 0.05;
  std::vector<Method> tests = {Method::wald, Method::lr, Method::pr, Method::eppv};
  /// `seed` and `threads` inside are overridden per replicate.
  EppvConfig eppv = [] {
    EppvConfig c;
    c.draws = 50;
    c.scheme = PermScheme::monte_carlo(199, 0);
    return c;
  }();
  Side pr_side = Side::two_sided;
  std::size_t pr_perms = 999;
  std::size_t bootstrap_resamples = 499;
  /// Bootstrap-Wald runs on the first this-many replicates only (all when unset).
  std::optional<std::size_t> bootstrap_replicates;
  std::uint64_t seed = 20240601;
  unsigned threads = 0;

  /// Throws ConfigError on invalid values.
  void validate() const;
};

struct TestTally {
  Method method = Method::eppv;
  std::size_t rejections = 0;
  std::size_t valid = 0;
  std::size_t failed = 0;

  double rate() const;
  /// Binomial standard error sqrt(rate (1 - rate) / valid).
  double standard_error() const;
};

struct SimulationReport {
  ScenarioConfig scenario;
  std::vector<TestTally> tallies;
  std::size_t null_fit_failures = 0;
  double wall_seconds = 0.0;

  const TestTally& tally(Method method) const;
};

/// Runs every replicate of one scenario: covariates and response are
/// regenerated per replicate from a stream seeded by (seed, replicate); the
/// null model is intercept + z1 and the full model adds z2. A test rejects when
/// its p-value is <= alpha. Replicates where a test errors count toward that
/// test's `failed` and are excluded from its denominator.
SimulationReport run_scenario(const ScenarioConfig& config);

struct Table1Config {
  std::size_t replicates = 2000;
  std::uint64_t seed = 20240601;
  std::size_t eppv_draws = 50;
  std::size_t eppv_perms = 199;
  std::size_t pr_perms = 999;
  bool include_bootstrap = false;
  std::size_t bootstrap_replicates = 1000;
  std::size_t bootstrap_resamples = 499;
  double alpha = 0.05;
  unsigned threads = 0;
};

struct Table1Cell {
  std::size_t n;
  int d;
  double beta2;
};

/// The twelve (n, d, beta2) cells in table order: n = 30 then 15; size rows
/// before power rows; d = 0, 1, -1 within each block.
std::vector<Table1Cell> table1_cells();

/// Scenario for one cell under the shared settings; each cell gets its own seed.
ScenarioConfig table1_scenario(const Table1Config& config, const Table1Cell& cell,
                               std::size_t cell_index);

struct Table1Report {
  Table1Config config;
  std::vector<SimulationReport> cells;
};

Table1Report table1_harness(const Table1Config& config);

}  // namespace eppv
