#pragma once

// Deterministic reductions and a small fixed-partition parallel loop.
//
// Every reduction in the library goes through pairwise_sum so that results do
// not depend on how work was split between threads: workers only ever fill
// disjoint output slots, and the summation tree is a function of the length
// alone.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace amalgam {

/// Pairwise (cascade) summation; leaf blocks of 32 are summed left to right.
double pairwise_sum(std::span<const double> values);

/// Number of worker threads used by parallel_for. Defaults to
/// std::thread::hardware_concurrency(); override with AMALGAM_THREADS.
unsigned worker_count();

/// Calls body(i) for i in [0, count). Iterations are split into contiguous
/// chunks, one per worker. body must only write state owned by index i.
/// Exceptions from any worker are rethrown (the one from the lowest chunk).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace amalgam
