#include "eppv/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace eppv {
namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;
constexpr double kRelativeTolerance = 1e-7;

/// C(n, k) when it does not exceed `limit`, nullopt otherwise.
std::optional<std::uint64_t> binomial_bounded(std::uint64_t n, std::uint64_t k,
                                              std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 value = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value > limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(value);
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

struct Table {
  std::uint64_t total;
  std::uint64_t row1;  // a + b
  std::uint64_t col1;  // a + c
  std::uint64_t lo;
  std::uint64_t hi;
};

Table make_table(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  Table t{};
  t.total = a + b + c + d;
  t.row1 = a + b;
  t.col1 = a + c;
  t.lo = (t.row1 + t.col1 > t.total) ? t.row1 + t.col1 - t.total : 0;
  t.hi = std::min(t.row1, t.col1);
  return t;
}

/// Tail sums of hypergeometric weights over k in [lo, hi].
struct Tails {
  double greater;
  double less;
  double two_sided;
  double point;
};

Tails tails_exact(const Table& t, std::uint64_t a, std::uint64_t denominator) {
  std::vector<std::uint64_t> w(t.hi - t.lo + 1);
  for (std::uint64_t k = t.lo; k <= t.hi; ++k) {
    w[k - t.lo] = *binomial_bounded(t.col1, k, kExactLimit) *
                  *binomial_bounded(t.total - t.col1, t.row1 - k, kExactLimit);
  }
  const std::uint64_t observed = w[a - t.lo];
  const long double cutoff = static_cast<long double>(observed) * (1.0L + kRelativeTolerance);
  std::uint64_t greater = 0, less = 0, two = 0;
  for (std::uint64_t k = t.lo; k <= t.hi; ++k) {
    const std::uint64_t wk = w[k - t.lo];
    if (k >= a) greater += wk;
    if (k <= a) less += wk;
    if (static_cast<long double>(wk) <= cutoff) two += wk;
  }
  const auto den = static_cast<double>(denominator);
  return {static_cast<double>(greater) / den, static_cast<double>(less) / den,
          static_cast<double>(two) / den, static_cast<double>(observed) / den};
}

Tails tails_log(const Table& t, std::uint64_t a) {
  const double log_den = log_binomial(t.total, t.row1);
  std::vector<double> prob(t.hi - t.lo + 1);
  for (std::uint64_t k = t.lo; k <= t.hi; ++k) {
    prob[k - t.lo] = std::exp(log_binomial(t.col1, k) +
                              log_binomial(t.total - t.col1, t.row1 - k) - log_den);
  }
  const double observed = prob[a - t.lo];
  const double cutoff = observed * (1.0 + kRelativeTolerance);
  double greater = 0.0, less = 0.0, two = 0.0;
  for (std::uint64_t k = t.lo; k <= t.hi; ++k) {
    const double pk = prob[k - t.lo];
    if (k >= a) greater += pk;
    if (k <= a) less += pk;
    if (pk <= cutoff) two += pk;
  }
  return {std::min(greater, 1.0), std::min(less, 1.0), std::min(two, 1.0), observed};
}

Tails compute_tails(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const Table t = make_table(a, b, c, d);
  if (auto den = binomial_bounded(t.total, t.row1, kExactLimit)) return tails_exact(t, a, *den);
  return tails_log(t, a);
}

bool degenerate(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return a + b == 0 || c + d == 0 || a + c == 0 || b + d == 0;
}

}  // namespace

double fisher_point_probability(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                std::uint64_t d) {
  if (degenerate(a, b, c, d)) return 1.0;
  return compute_tails(a, b, c, d).point;
}

TestResult fisher_exact(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                        Side side) {
  TestResult result;
  result.method = Method::fisher;
  result.side = side;
  result.statistic = static_cast<double>(a);
  result.detail["a"] = static_cast<double>(a);
  result.detail["b"] = static_cast<double>(b);
  result.detail["c"] = static_cast<double>(c);
  result.detail["d"] = static_cast<double>(d);
  if (degenerate(a, b, c, d)) {
    result.p_value = 1.0;
    result.detail["degenerate"] = 1.0;
    result.warnings.emplace_back("a margin of the 2x2 table is zero");
    return result;
  }
  const Tails tails = compute_tails(a, b, c, d);
  switch (side) {
    case Side::greater: result.p_value = tails.greater; break;
    case Side::less: result.p_value = tails.less; break;
    case Side::two_sided: result.p_value = tails.two_sided; break;
  }
  result.p_value = std::clamp(result.p_value, 0.0, 1.0);
  result.detail["degenerate"] = 0.0;
  return result;
}

}  // namespace eppv
