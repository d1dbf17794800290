#include "eppv/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "eppv/errors.hpp"
#include "eppv/score_tests.hpp"

namespace eppv {
namespace {

std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

void PermScheme::validate(std::size_t n) const {
  if (mode == PermMode::exhaustive) {
    if (n > kMaxExhaustiveN) {
      throw ConfigError("exhaustive permutations are limited to n <= " +
                        std::to_string(kMaxExhaustiveN) + " (got n = " + std::to_string(n) +
                        ")");
    }
  } else if (m < kMinMonteCarloPerms) {
    throw ConfigError("Monte Carlo permutation count must be at least " +
                      std::to_string(kMinMonteCarloPerms) + " (got " + std::to_string(m) + ")");
  }
}

std::size_t PermScheme::count(std::size_t n) const {
  return mode == PermMode::exhaustive ? factorial(n) : m;
}

PermutationStream::PermutationStream(std::size_t n, const PermScheme& scheme)
    : scheme_(scheme), perm_(n), total_(0), rng_(scheme.seed) {
  scheme.validate(n);
  total_ = scheme.count(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
}

bool PermutationStream::next() {
  if (produced_ >= total_) return false;
  if (scheme_.mode == PermMode::exhaustive) {
    if (produced_ > 0) std::next_permutation(perm_.begin(), perm_.end());
  } else {
    rng_.shuffle(std::span<std::size_t>(perm_));
  }
  ++produced_;
  return true;
}

double PermutationCount::pvalue() const {
  return static_cast<double>(numerator()) / static_cast<double>(denominator());
}

double permutation_pvalue(double s_obs, std::span<const double> s_perms, PermMode mode,
                          Side side, double center) {
  if (s_perms.empty()) throw ConfigError("permutation distribution is empty");
  PermutationCount count;
  count.mode = mode;
  count.total = s_perms.size();
  for (double s : s_perms) {
    if (at_least_as_extreme(s, s_obs, side, center)) ++count.exceed;
  }
  return count.pvalue();
}

TestResult pr_test(const Dataset& data, const PermScheme& scheme, Side side) {
  validate(data);
  const LogisticFit null_fit = fit_logistic(data.y, data.null_design);
  if (!null_fit.converged) throw ConvergenceError("null model did not converge");
  return pr_test(data, null_fit, scheme, side);
}

TestResult pr_test(const Dataset& data, const LogisticFit& null_fit, const PermScheme& scheme,
                   Side side) {
  validate(data);
  const auto n = static_cast<std::size_t>(data.y.size());
  scheme.validate(n);
  const Eigen::VectorXd zc = center(data.tested);
  const Eigen::VectorXd& residuals = null_fit.residuals;
  if (static_cast<std::size_t>(residuals.size()) != n) {
    throw DimensionError("null fit does not match the dataset");
  }

  auto statistic = [&](std::span<const std::size_t> perm) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += zc[i] * residuals[perm[i]];
    return s;
  };
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  const double s_obs = statistic(identity);

  const PermutationCount count = count_permutations(n, scheme, s_obs, side, statistic);

  TestResult result;
  result.method = Method::pr;
  result.side = side;
  result.statistic = s_obs;
  result.p_value = count.pvalue();
  result.detail["n_perms"] = static_cast<double>(count.total);
  result.detail["exceed"] = static_cast<double>(count.exceed);
  result.detail["exhaustive"] = scheme.mode == PermMode::exhaustive ? 1.0 : 0.0;
  if (scheme.mode == PermMode::monte_carlo) result.seed = scheme.seed;
  return result;
}

}  // namespace eppv
