#pragma once

#include <cstddef>
#include <functional>

namespace eppv {

/// Number of worker threads to use when the caller passes 0.
unsigned default_thread_count();

/// Runs body(i) for every i in [0, count). Work is claimed dynamically by up
/// to `threads` workers (0 selects default_thread_count()). The first exception
/// thrown by any body is rethrown on the calling thread after all workers stop.
/// Callers write results into per-index slots so the outcome never depends on
/// scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace eppv
