#pragma once

#include <cstddef>
#include <functional>

namespace dsdetect {

/// Number of workers to use for a hint; 0 means one per hardware thread.
unsigned resolve_workers(unsigned hint) noexcept;

/// Calls body(i) for every i in [0, count) on up to `workers` threads.
/// Indices are handed out dynamically, so body must not depend on which
/// thread runs it. The first exception thrown by any call is rethrown after
/// all workers stop.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace dsdetect
