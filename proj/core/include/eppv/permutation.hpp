#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eppv/logistic.hpp"
#include "eppv/random.hpp"
#include "eppv/test_result.hpp"

namespace eppv {

enum class PermMode { exhaustive, monte_carlo };

inline constexpr std::size_t kMaxExhaustiveN = 9;
inline constexpr std::size_t kMinMonteCarloPerms = 19;
/// Absolute slack on ">=" comparisons of permuted statistics.
inline constexpr double kTieSlack = 1e-12;

/// Source of permutations: all n! in lexicographic order, or m uniform draws.
struct PermScheme {
  PermMode mode = PermMode::monte_carlo;
  std::size_t m = 999;
  std::uint64_t seed = 0;

  static PermScheme exhaustive() { return {PermMode::exhaustive, 0, 0}; }
  static PermScheme monte_carlo(std::size_t m, std::uint64_t seed) {
    return {PermMode::monte_carlo, m, seed};
  }

  /// Throws ConfigError if the scheme cannot be used for n observations.
  void validate(std::size_t n) const;

  /// Number of permutations the stream will yield for n observations.
  std::size_t count(std::size_t n) const;
};

/// Deterministic generator of index permutations.
///
///   PermutationStream stream(n, scheme);
///   while (stream.next()) use(stream.current());
class PermutationStream {
 public:
  PermutationStream(std::size_t n, const PermScheme& scheme);

  bool next();
  std::span<const std::size_t> current() const { return perm_; }
  std::size_t size() const { return total_; }

 private:
  PermScheme scheme_;
  std::vector<std::size_t> perm_;
  std::size_t total_;
  std::size_t produced_ = 0;
  Rng rng_;
};

/// Monotone "extremeness" transform for a sidedness rule. Two-sided
/// comparisons measure the distance from `center`, the mean of the
/// permutation distribution.
inline double extremeness(double s, Side side, double center = 0.0) {
  switch (side) {
    case Side::greater: return s;
    case Side::less: return -s;
    case Side::two_sided: return std::abs(s - center);
  }
  return s;
}

inline bool at_least_as_extreme(double s, double s_obs, Side side, double center = 0.0) {
  return extremeness(s, side, center) >= extremeness(s_obs, side, center) - kTieSlack;
}

/// Integer outcome of a permutation test; kept as counts so averages over
/// many tests can be formed exactly.
struct PermutationCount {
  std::uint64_t exceed = 0;
  std::uint64_t total = 0;
  PermMode mode = PermMode::monte_carlo;

  /// exceed / total (exhaustive) or (1 + exceed) / (total + 1) (Monte Carlo).
  double pvalue() const;
  std::uint64_t numerator() const { return mode == PermMode::exhaustive ? exceed : exceed + 1; }
  std::uint64_t denominator() const { return mode == PermMode::exhaustive ? total : total + 1; }
};

double permutation_pvalue(double s_obs, std::span<const double> s_perms, PermMode mode,
                          Side side, double center = 0.0);

/// Runs `statistic(perm)` over every permutation of the scheme and counts those
/// at least as extreme as s_obs.
template <typename Statistic>
PermutationCount count_permutations(std::size_t n, const PermScheme& scheme, double s_obs,
                                    Side side, Statistic&& statistic, double center = 0.0) {
  PermutationStream stream(n, scheme);
  PermutationCount count;
  count.mode = scheme.mode;
  while (stream.next()) {
    ++count.total;
    if (at_least_as_extreme(statistic(stream.current()), s_obs, side, center)) ++count.exceed;
  }
  return count;
}

/// Permutation-of-residuals test: s = zc^T R with zc the centered tested
/// covariate and R the null-model residuals; residuals are permuted against
/// fixed zc.
TestResult pr_test(const Dataset& data, const PermScheme& scheme, Side side);
TestResult pr_test(const Dataset& data, const LogisticFit& null_fit, const PermScheme& scheme,
                   Side side);

}  // namespace eppv
