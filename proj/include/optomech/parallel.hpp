#pragma once

#include <cstddef>
#include <functional>

namespace optomech {

/// Worker count: hardware concurrency, capped by OPTOMECH_SENSE_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is visited
/// exactly once, so writes to slot i give deterministic output ordering.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace optomech
