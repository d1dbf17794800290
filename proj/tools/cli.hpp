#pragma once

#include <iosfwd>

namespace eppv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitFitFailure = 3;

/// Entry point of the `eppv` tool. Results go to `out`, diagnostics to `err`.
///
///   eppv test --data F --response COL --null COLS --test COL [--method M] ...
///   eppv simulate --n N --d D --beta2 B --replicates R [--tests LIST] ...
///   eppv table1 [--replicates R] [--seed N] ...
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eppv::cli
