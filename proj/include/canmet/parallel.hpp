#pragma once

#include <cstddef>
#include <functional>

namespace canmet {

/// Global worker cap; 0 restores the hardware default.
void set_max_threads(int n);
int max_threads();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks, so
// writes to preallocated per-index slots stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace canmet
