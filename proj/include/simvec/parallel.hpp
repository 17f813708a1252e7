#pragma once

#include <cstddef>
#include <functional>

namespace simvec {

// Global worker cap (the CLI's --threads). 0 means hardware concurrency.
void set_max_threads(std::size_t n);
std::size_t max_threads();

// Runs fn(i) for i in [0, n) over up to max_threads() workers in contiguous
// blocks. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace simvec
