#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace splitvar {

/// Worker count used by cell loops. Defaults to 1.
void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited exactly once; chunk results must be written to disjoint slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Cascade summation; the reduction tree depends only on the length, so
/// results do not depend on the thread count.
double pairwise_sum(std::span<const double> v);

} // namespace splitvar
