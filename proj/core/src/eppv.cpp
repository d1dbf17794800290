#include "eppv/eppv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "eppv/errors.hpp"
#include "eppv/parallel.hpp"
#include "eppv/score_tests.hpp"

namespace eppv {
namespace {

void check_probability_vector(const Eigen::VectorXd& y, const Eigen::VectorXd& pi) {
  if (pi.size() != y.size()) throw DimensionError("probability vector length differs from y");
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    if (!(pi[i] >= 0.0 && pi[i] <= 1.0)) {
      throw ConfigError("probability " + std::to_string(i + 1) + " is outside [0, 1]");
    }
    if (y[i] == 1.0 && pi[i] == 0.0) {
      throw InconsistentProbability(
          "y = 1 with probability 0 at observation " + std::to_string(i + 1), i);
    }
    if (y[i] == 0.0 && pi[i] == 1.0) {
      throw InconsistentProbability(
          "y = 0 with probability 1 at observation " + std::to_string(i + 1), i);
    }
  }
}

double indicator_statistic(const Eigen::VectorXd& zc, const Eigen::VectorXd& eps,
                           const Eigen::VectorXd& pi, std::span<const std::size_t> perm) {
  double s = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (eps[perm[i]] <= pi[i]) s += zc[i];
  }
  return s;
}

Eigen::VectorXd draw_uniforms(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = rng.uniform_open();
  return u;
}

std::size_t covariate_column(const Eigen::MatrixXd& design) {
  if (design.cols() != 2 || !has_intercept_column(design)) {
    throw ConfigError("minimax Eppv needs a null model of an intercept plus one covariate");
  }
  return (design.col(0).array() == 1.0).all() ? 1 : 0;
}

}  // namespace

Eigen::VectorXd latent_from_uniforms(const Eigen::VectorXd& y, const Eigen::VectorXd& pi,
                                     const Eigen::VectorXd& u) {
  check_probability_vector(y, pi);
  if (u.size() != y.size()) throw DimensionError("uniform vector length differs from y");
  Eigen::VectorXd eps(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) {
      eps[i] = pi[i] * u[i];
    } else {
      eps[i] = pi[i] + (1.0 - pi[i]) * u[i];
      if (eps[i] <= pi[i]) eps[i] = std::nextafter(pi[i], 2.0);
    }
  }
  return eps;
}

Eigen::VectorXd sample_latent(const Eigen::VectorXd& y, const Eigen::VectorXd& pi, Rng& rng) {
  return latent_from_uniforms(y, pi, draw_uniforms(rng, y.size()));
}

double latent_permutation_mean(const Eigen::VectorXd& centered_tested, const Eigen::VectorXd& eps,
                               const Eigen::VectorXd& pi) {
  const auto n = eps.size();
  if (centered_tested.size() != n || pi.size() != n) {
    throw DimensionError("latent permutation mean: lengths do not conform");
  }
  std::vector<double> sorted(eps.data(), eps.data() + n);
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), pi[i]) - sorted.begin();
    total += centered_tested[i] * static_cast<double>(below);
  }
  return total / static_cast<double>(n);
}

PermutationCount latent_permutation_count(const Eigen::VectorXd& centered_tested,
                                          const Eigen::VectorXd& eps, const Eigen::VectorXd& pi,
                                          double s_obs, const PermScheme& scheme, Side side) {
  const auto n = static_cast<std::size_t>(eps.size());
  if (static_cast<std::size_t>(centered_tested.size()) != n ||
      static_cast<std::size_t>(pi.size()) != n) {
    throw DimensionError("latent permutation: lengths do not conform");
  }
  const double mean =
      side == Side::two_sided ? latent_permutation_mean(centered_tested, eps, pi) : 0.0;
  return count_permutations(
      n, scheme, s_obs, side,
      [&](std::span<const std::size_t> perm) {
        return indicator_statistic(centered_tested, eps, pi, perm);
      },
      mean);
}

EppvOutcome eppv_with_probabilities(const Dataset& data, const Eigen::VectorXd& pi,
                                    const EppvConfig& config) {
  validate(data);
  const auto n = static_cast<std::size_t>(data.y.size());
  if (config.draws == 0) throw ConfigError("Eppv needs at least one latent draw");
  config.scheme.validate(n);
  check_probability_vector(data.y, pi);

  const Eigen::VectorXd zc = center(data.tested);
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  const double s_obs = centered_indicator_statistic(data.tested, data.y);

  std::vector<PermutationCount> counts(config.draws);
  std::vector<double> draw_s_obs(config.draws);
  parallel_for(config.draws, config.threads, [&](std::size_t d) {
    Rng latent_rng(derive_seed(config.seed, {0, d}));
    const Eigen::VectorXd eps = sample_latent(data.y, pi, latent_rng);
    draw_s_obs[d] = indicator_statistic(zc, eps, pi, identity);
    PermScheme inner = config.scheme;
    inner.seed = derive_seed(config.seed, {1, d});
    counts[d] = latent_permutation_count(zc, eps, pi, s_obs, inner, config.side);
  });

  for (double s : draw_s_obs) {
    if (s != s_obs) throw std::logic_error("latent draw does not reproduce the observed statistic");
  }

  std::uint64_t numerator = 0;
  const std::uint64_t per_draw_denominator = counts.front().denominator();
  EppvResult result;
  result.per_draw_pvalues.reserve(config.draws);
  for (const auto& c : counts) {
    numerator += c.numerator();
    result.per_draw_pvalues.push_back(c.pvalue());
  }
  const auto draws = static_cast<double>(config.draws);
  result.eppv = static_cast<double>(numerator) /
                (draws * static_cast<double>(per_draw_denominator));
  if (config.draws > 1) {
    double ss = 0.0;
    for (double p : result.per_draw_pvalues) ss += (p - result.eppv) * (p - result.eppv);
    result.mc_se = std::sqrt(ss / (draws - 1.0) / draws);
  }
  result.s_obs = s_obs;
  result.pi_used = pi;

  EppvOutcome outcome;
  outcome.test.method = Method::eppv;
  outcome.test.side = config.side;
  outcome.test.statistic = s_obs;
  outcome.test.p_value = result.eppv;
  outcome.test.seed = config.seed;
  outcome.test.detail["draws"] = draws;
  outcome.test.detail["n_perms"] = static_cast<double>(counts.front().total);
  outcome.test.detail["mc_se"] = result.mc_se;
  outcome.test.detail["exhaustive"] = config.scheme.mode == PermMode::exhaustive ? 1.0 : 0.0;
  outcome.detail = std::move(result);
  return outcome;
}

EppvOutcome eppv_test(const Dataset& data, const LogisticFit& null_fit,
                      const EppvConfig& config) {
  return eppv_with_probabilities(data, null_fit.pi_hat, config);
}

EppvOutcome eppv_test(const Dataset& data, const EppvConfig& config) {
  validate(data);
  if (config.pi_source == PiSource::known) {
    return eppv_with_probabilities(data, config.known_pi, config);
  }
  const LogisticFit null_fit = fit_logistic(data.y, data.null_design);
  if (!null_fit.converged) throw ConvergenceError("null model did not converge");
  return eppv_test(data, null_fit, config);
}

EppvOutcome eppv_at_beta1(const Dataset& data, double beta1, const EppvConfig& config) {
  validate(data);
  const std::size_t column = covariate_column(data.null_design);
  FitOptions options;
  options.offset = beta1 * data.null_design.col(static_cast<Eigen::Index>(column));
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(data.y.size(), 1);
  const LogisticFit profile = fit_logistic(data.y, ones, options);
  if (!profile.converged) throw ConvergenceError("profiled intercept did not converge");
  return eppv_with_probabilities(data, profile.pi_hat, config);
}

MinimaxOutcome minimax_eppv(const Dataset& data, double a, double b, std::size_t grid_points,
                            const EppvConfig& config) {
  validate(data);
  covariate_column(data.null_design);
  if (!(a <= b)) throw ConfigError("minimax interval needs a <= b");
  if (a < b && grid_points < 3) throw ConfigError("minimax grid needs at least 3 points");

  MinimaxOutcome outcome;
  auto evaluate = [&](double beta1) -> std::optional<double> {
    try {
      const double value = eppv_at_beta1(data, beta1, config).test.p_value;
      outcome.evaluations.push_back({beta1, value});
      return value;
    } catch (const FitError&) {
      ++outcome.failed_points;
      return std::nullopt;
    }
  };

  if (a == b) {
    evaluate(a);
  } else {
    const double width = (b - a) / static_cast<double>(grid_points - 1);
    std::optional<std::size_t> best;
    std::vector<std::optional<double>> grid(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k) {
      const double beta1 = k + 1 == grid_points ? b : a + static_cast<double>(k) * width;
      grid[k] = evaluate(beta1);
      if (grid[k] && (!best || *grid[k] > *grid[*best])) best = k;
    }
    if (best) {
      double lo = a + static_cast<double>(*best == 0 ? 0 : *best - 1) * width;
      double hi = std::min(b, a + static_cast<double>(*best + 1) * width);
      constexpr double kGolden = 0.6180339887498949;
      constexpr double kFailed = -std::numeric_limits<double>::infinity();
      double x1 = hi - kGolden * (hi - lo);
      double x2 = lo + kGolden * (hi - lo);
      double f1 = evaluate(x1).value_or(kFailed);
      double f2 = evaluate(x2).value_or(kFailed);
      for (int iter = 0; iter < 12; ++iter) {
        if (f1 >= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGolden * (hi - lo);
          f1 = evaluate(x1).value_or(kFailed);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGolden * (hi - lo);
          f2 = evaluate(x2).value_or(kFailed);
        }
      }
    }
  }

  if (outcome.evaluations.empty()) {
    throw FitError("minimax Eppv: the profiled null fit failed at every beta1");
  }
  const auto best = std::max_element(
      outcome.evaluations.begin(), outcome.evaluations.end(),
      [](const MinimaxPoint& l, const MinimaxPoint& r) { return l.eppv < r.eppv; });
  outcome.argmax_beta1 = best->beta1;

  outcome.test.method = Method::eppv;
  outcome.test.side = config.side;
  outcome.test.statistic = centered_indicator_statistic(data.tested, data.y);
  outcome.test.p_value = best->eppv;
  outcome.test.seed = config.seed;
  outcome.test.detail["minimax"] = 1.0;
  outcome.test.detail["interval_lower"] = a;
  outcome.test.detail["interval_upper"] = b;
  outcome.test.detail["argmax_beta1"] = best->beta1;
  outcome.test.detail["evaluations"] = static_cast<double>(outcome.evaluations.size());
  outcome.test.detail["failed_points"] = static_cast<double>(outcome.failed_points);
  outcome.test.detail["draws"] = static_cast<double>(config.draws);
  return outcome;
}

}  // namespace eppv
