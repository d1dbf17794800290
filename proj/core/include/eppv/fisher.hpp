#pragma once

#include <cstdint>

#include "eppv/test_result.hpp"

namespace eppv {

/// 2x2 table
///
///              tested=1  tested=0
///   y=1           a         b
///   y=0           c         d
///
/// Under independence with fixed margins the count A in cell `a` is
/// hypergeometric. side=greater gives P(A >= a), side=less P(A <= a), and
/// two_sided sums the probabilities of all tables no more probable than the
/// observed one (relative tolerance 1e-7 on the comparison).
///
/// When C(N, a+b) fits in 53 bits the tail is formed from exact integer
/// counts and a single division, so it equals the corresponding permutation
/// frequency count/N! bit for bit. Larger tables use log-gamma weights.
///
/// A zero row or column margin yields p = 1 and detail["degenerate"] = 1.
TestResult fisher_exact(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                        Side side);

/// Hypergeometric point probability P(A = a) for the same table.
double fisher_point_probability(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                std::uint64_t d);

}  // namespace eppv
