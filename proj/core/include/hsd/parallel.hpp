#pragma once

#include <cstddef>
#include <functional>

namespace hsd {

/// Process-wide worker count used by slice-parallel operations (default 1).
void set_thread_count(int threads);
int thread_count() noexcept;

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks;
/// each index is processed exactly once and never depends on the split, so
/// results are bitwise identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hsd
