#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "eppv/logistic.hpp"
#include "eppv/permutation.hpp"
#include "eppv/random.hpp"
#include "eppv/test_result.hpp"

namespace eppv {

enum class PiSource { mle_under_null, known };

struct EppvConfig {
  std::size_t draws = 200;
  /// Inner permutation engine. In Monte Carlo mode the stream for draw d is
  /// seeded from (seed, d); `scheme.seed` is not used.
  PermScheme scheme = PermScheme::monte_carlo(999, 0);
  Side side = Side::two_sided;
  PiSource pi_source = PiSource::mle_under_null;
  Eigen::VectorXd known_pi;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct EppvResult {
  double eppv = 1.0;
  std::vector<double> per_draw_pvalues;
  double mc_se = 0.0;
  double s_obs = 0.0;
  Eigen::VectorXd pi_used;
};

struct EppvOutcome {
  TestResult test;
  EppvResult detail;
};

/// Latent uniforms consistent with y: eps_i = pi_i u_i when y_i = 1 and
/// pi_i + (1 - pi_i) u_i when y_i = 0, for u_i in (0, 1). The result always
/// satisfies (eps_i <= pi_i) == y_i. Throws InconsistentProbability when
/// y_i = 1 with pi_i = 0 or y_i = 0 with pi_i = 1.
Eigen::VectorXd latent_from_uniforms(const Eigen::VectorXd& y, const Eigen::VectorXd& pi,
                                     const Eigen::VectorXd& u);

/// Draws eps from its law conditional on y (uniform on [0, pi_i] or [pi_i, 1]).
Eigen::VectorXd sample_latent(const Eigen::VectorXd& y, const Eigen::VectorXd& pi, Rng& rng);

/// Exact mean over all n! permutations of sum_i zc_i 1{eps_sigma(i) <= pi_i},
/// i.e. sum_i zc_i #{j : eps_j <= pi_i} / n. Zero when all pi_i are equal but
/// not in general, since the thresholds stay attached to their positions.
double latent_permutation_mean(const Eigen::VectorXd& centered_tested, const Eigen::VectorXd& eps,
                               const Eigen::VectorXd& pi);

/// Permutation count for one latent draw: s_sigma = sum_i zc_i 1{eps_sigma(i) <= pi_i}
/// compared against s_obs. Two-sided comparisons are about
/// latent_permutation_mean.
PermutationCount latent_permutation_count(const Eigen::VectorXd& centered_tested,
                                          const Eigen::VectorXd& eps, const Eigen::VectorXd& pi,
                                          double s_obs, const PermScheme& scheme, Side side);

/// Expected permutation p-value: the mean over latent draws of the
/// permutation p-value of the centered indicator statistic.
///
/// Probabilities come from the null-model MLE (computed once and held fixed)
/// or from `config.known_pi`. The average is formed from integer counts so it
/// does not depend on the order in which draws complete.
EppvOutcome eppv_test(const Dataset& data, const EppvConfig& config);

/// Plug-in variant with a null fit computed by the caller.
EppvOutcome eppv_test(const Dataset& data, const LogisticFit& null_fit,
                      const EppvConfig& config);

/// Eppv with fixed probabilities (ignores config.pi_source).
EppvOutcome eppv_with_probabilities(const Dataset& data, const Eigen::VectorXd& pi,
                                    const EppvConfig& config);

struct MinimaxPoint {
  double beta1;
  double eppv;
};

struct MinimaxOutcome {
  TestResult test;
  double argmax_beta1 = 0.0;
  std::vector<MinimaxPoint> evaluations;
  std::size_t failed_points = 0;
};

/// Largest Eppv over beta1 in [a, b] for a null model of intercept plus one
/// covariate. At each beta1 the intercept is profiled by maximum likelihood
/// and Eppv is evaluated with the implied known probabilities. The search is
/// a uniform grid of `grid_points` values followed by golden-section
/// refinement around the best grid point. The same latent and permutation
/// seeds are used at every beta1.
MinimaxOutcome minimax_eppv(const Dataset& data, double a, double b, std::size_t grid_points,
                            const EppvConfig& config);

/// Eppv at one fixed beta1 with the intercept profiled out.
EppvOutcome eppv_at_beta1(const Dataset& data, double beta1, const EppvConfig& config);

}  // namespace eppv
