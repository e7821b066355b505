#pragma once

#include <cstddef>
#include <functional>

namespace schroflow {

/// Kernel thread cap: SCHROFLOW_THREADS if set (>= 1), else the hardware
/// concurrency. Read once per process.
int kernel_threads();

/// Runs body(begin, end) over [0, n) split into contiguous chunks. Small
/// ranges run inline. Bodies must write disjoint outputs; reductions stay
/// outside so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace schroflow
