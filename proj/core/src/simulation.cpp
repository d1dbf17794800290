#include "eppv/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "eppv/errors.hpp"
#include "eppv/parallel.hpp"
#include "eppv/score_tests.hpp"

namespace eppv {
namespace {

enum Stream : std::uint64_t { kCovariates, kResponse, kEppv, kPr, kBootstrap };

struct ReplicateOutcome {
  bool null_failed = false;
  // Per enabled test: -1 failed, 0 accepted, 1 rejected, 2 not run.
  std::vector<int> decisions;
};

}  // namespace

Covariates generate_covariates(std::size_t n, int d, Rng& rng) {
  if (d < -1 || d > 1) throw ConfigError("d must be -1, 0 or 1 (got " + std::to_string(d) + ")");
  Covariates c{Eigen::VectorXd(static_cast<Eigen::Index>(n)),
               Eigen::VectorXd(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    double z1 = 0.0, w2 = 0.0;
    do {
      z1 = rng.exponential() - 1.0;
      w2 = rng.exponential();
    } while (d == -1 && std::abs(z1) < 1e-12);
    const auto k = static_cast<Eigen::Index>(i);
    c.z1[k] = z1;
    c.z2[k] = d == 0 ? w2 - 1.0 : (d == 1 ? (w2 - 1.0) * z1 : (w2 - 1.0) / z1);
  }
  return c;
}

Eigen::VectorXd generate_response(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                                  double beta0, double beta1, double beta2, Rng& rng) {
  if (z1.size() != z2.size()) throw DimensionError("z1 and z2 lengths differ");
  Eigen::VectorXd y(z1.size());
  for (Eigen::Index i = 0; i < z1.size(); ++i) {
    const double pi = inverse_logit(beta0 + beta1 * z1[i] + beta2 * z2[i]);
    y[i] = rng.uniform_open() <= pi ? 1.0 : 0.0;
  }
  return y;
}

void ScenarioConfig::validate() const {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (d < -1 || d > 1) throw ConfigError("d must be -1, 0 or 1 (got " + std::to_string(d) + ")");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (tests.empty()) throw ConfigError("no tests selected");
  for (Method m : tests) {
    if (m == Method::fisher) throw ConfigError("fisher is not available in simulations");
  }
  if (eppv.draws < 1) throw ConfigError("Eppv draws must be at least 1");
  eppv.scheme.validate(n);
  PermScheme::monte_carlo(pr_perms, 0).validate(n);
  if (bootstrap_resamples < 1) throw ConfigError("bootstrap resamples must be at least 1");
}

double TestTally::rate() const {
  return valid == 0 ? 0.0 : static_cast<double>(rejections) / static_cast<double>(valid);
}

double TestTally::standard_error() const {
  if (valid == 0) return 0.0;
  const double r = rate();
  return std::sqrt(r * (1.0 - r) / static_cast<double>(valid));
}

const TestTally& SimulationReport::tally(Method method) const {
  for (const auto& t : tallies) {
    if (t.method == method) return t;
  }
  throw ConfigError("test '" + std::string(to_string(method)) + "' was not part of the scenario");
}

SimulationReport run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t boot_limit = config.bootstrap_replicates.value_or(config.replicates);

  std::vector<ReplicateOutcome> outcomes(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t r) {
    ReplicateOutcome& out = outcomes[r];
    out.decisions.assign(config.tests.size(), 2);

    Rng covariate_rng(derive_seed(config.seed, {r, kCovariates}));
    Rng response_rng(derive_seed(config.seed, {r, kResponse}));
    const Covariates cov = generate_covariates(config.n, config.d, covariate_rng);
    Dataset data;
    data.y = generate_response(cov.z1, cov.z2, config.beta0, config.beta1, config.beta2,
                               response_rng);
    data.null_design.resize(static_cast<Eigen::Index>(config.n), 2);
    data.null_design.col(0).setOnes();
    data.null_design.col(1) = cov.z1;
    data.tested = cov.z2;

    std::optional<LogisticFit> null_fit;
    try {
      LogisticFit fit = fit_logistic(data.y, data.null_design);
      if (fit.converged) null_fit = std::move(fit);
    } catch (const FitError&) {
    }
    out.null_failed = !null_fit.has_value();

    for (std::size_t t = 0; t < config.tests.size(); ++t) {
      const Method method = config.tests[t];
      if (method == Method::boot_wald && r >= boot_limit) continue;
      const bool needs_null = method == Method::lr || method == Method::pr ||
                              method == Method::eppv;
      if (needs_null && !null_fit) {
        out.decisions[t] = -1;
        continue;
      }
      try {
        double p = 1.0;
        switch (method) {
          case Method::wald: p = wald_test(data).p_value; break;
          case Method::lr: p = lr_test(data, *null_fit).p_value; break;
          case Method::pr:
            p = pr_test(data, *null_fit,
                        PermScheme::monte_carlo(config.pr_perms,
                                                derive_seed(config.seed, {r, kPr})),
                        config.pr_side)
                    .p_value;
            break;
          case Method::eppv: {
            EppvConfig ec = config.eppv;
            ec.seed = derive_seed(config.seed, {r, kEppv});
            ec.threads = 1;
            p = eppv_test(data, *null_fit, ec).test.p_value;
            break;
          }
          case Method::boot_wald: {
            BootstrapOptions bo;
            bo.resamples = config.bootstrap_resamples;
            bo.seed = derive_seed(config.seed, {r, kBootstrap});
            bo.threads = 1;
            p = bootstrap_wald_test(data, bo).p_value;
            break;
          }
          case Method::fisher: break;
        }
        out.decisions[t] = p <= config.alpha ? 1 : 0;
      } catch (const FitError&) {
        out.decisions[t] = -1;
      }
    }
  });

  SimulationReport report;
  report.scenario = config;
  for (Method m : config.tests) report.tallies.push_back({m, 0, 0, 0});
  for (const auto& out : outcomes) {
    if (out.null_failed) ++report.null_fit_failures;
    for (std::size_t t = 0; t < config.tests.size(); ++t) {
      TestTally& tally = report.tallies[t];
      switch (out.decisions[t]) {
        case -1: ++tally.failed; break;
        case 0: ++tally.valid; break;
        case 1:
          ++tally.valid;
          ++tally.rejections;
          break;
        default: break;
      }
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<Table1Cell> table1_cells() {
  std::vector<Table1Cell> cells;
  for (const auto& [n, power_beta] : {std::pair<std::size_t, double>{30, 1.0}, {15, 2.0}}) {
    for (double beta2 : {0.0, power_beta}) {
      for (int d : {0, 1, -1}) cells.push_back({n, d, beta2});
    }
  }
  return cells;
}

ScenarioConfig table1_scenario(const Table1Config& config, const Table1Cell& cell,
                               std::size_t cell_index) {
  ScenarioConfig sc;
  sc.n = cell.n;
  sc.d = cell.d;
  sc.beta2 = cell.beta2;
  sc.replicates = config.replicates;
  sc.alpha = config.alpha;
  sc.eppv.draws = config.eppv_draws;
  sc.eppv.scheme = PermScheme::monte_carlo(config.eppv_perms, 0);
  sc.pr_perms = config.pr_perms;
  sc.seed = derive_seed(config.seed, {cell_index});
  sc.threads = config.threads;
  sc.tests = {Method::wald, Method::lr, Method::pr, Method::eppv};
  if (config.include_bootstrap && cell.n == 30) {
    sc.tests.push_back(Method::boot_wald);
    sc.bootstrap_resamples = config.bootstrap_resamples;
    sc.bootstrap_replicates = std::min(config.bootstrap_replicates, config.replicates);
  }
  return sc;
}

Table1Report table1_harness(const Table1Config& config) {
  Table1Report report;
  report.config = config;
  const auto cells = table1_cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    report.cells.push_back(run_scenario(table1_scenario(config, cells[k], k)));
  }
  return report;
}

}  // namespace eppv
