#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace magband {

// Runs fn(i) for i in [0, n) on `workers` threads (<=0 means hardware
// concurrency).  Tasks are indexed, results must be written to slot i by the
// caller, so the outcome is independent of the worker count.  The first
// exception (by lowest index) is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Fixed-order pairwise reduction; deterministic regardless of how the
// summands were produced.
double pairwise_sum(const std::vector<double>& xs);

} // namespace magband
