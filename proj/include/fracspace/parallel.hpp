#pragma once

#include <cstddef>

namespace fracspace {

/// Serial runs the reference single-thread path; Parallel uses OpenMP.
/// Both paths compute bitwise-identical results: threads only ever write
/// disjoint output slots and each slot is accumulated in a fixed order.
enum class ExecMode { Serial, Parallel };

/// Worker cap: min(FRACSPACE_THREADS, hardware concurrency), at least 1.
int max_threads();

/// Override the worker cap for this process (0 restores the default).
void set_max_threads(int n);

namespace detail {
void parallel_for_impl(std::size_t n, void (*body)(std::size_t, void*), void* ctx,
                       ExecMode mode);
}

/// Runs fn(i) for i in [0, n). In Parallel mode iterations are spread over
/// OpenMP threads with a static schedule; fn must write only slot-i state.
template <class F>
void parallel_for(std::size_t n, ExecMode mode, F&& fn) {
  auto body = [](std::size_t i, void* ctx) { (*static_cast<F*>(ctx))(i); };
  detail::parallel_for_impl(n, body, &fn, mode);
}

}  // namespace fracspace
