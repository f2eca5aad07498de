#include "fracspace/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#ifdef FRACSPACE_HAVE_OPENMP
#include <omp.h>
#endif

namespace fracspace {

namespace {
std::atomic<int> g_override{0};

int env_threads() {
  const char* e = std::getenv("FRACSPACE_THREADS");
  if (!e) return 0;
  int v = std::atoi(e);
  return v > 0 ? v : 0;
}
}  // namespace

int max_threads() {
  int o = g_override.load();
  if (o > 0) return o;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int env = env_threads();
  return env > 0 ? std::min(env, hw) : hw;
}

void set_max_threads(int n) { g_override.store(n > 0 ? n : 0); }

namespace detail {

void parallel_for_impl(std::size_t n, void (*body)(std::size_t, void*), void* ctx,
                       ExecMode mode) {
#ifdef FRACSPACE_HAVE_OPENMP
  if (mode == ExecMode::Parallel && max_threads() > 1 && n > 1) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long long i = 0; i < nn; ++i) body(static_cast<std::size_t>(i), ctx);
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i, ctx);
}

}  // namespace detail
}  // namespace fracspace
