#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polya {

// Worker count resolution: an explicit positive request wins, then the
// POLYA_THREADS environment variable, then the OpenMP default (1 without
// OpenMP).
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("POLYA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for every i in [0, count). Work item i must depend only on its
// own index (plus an RNG stream derived from it) and write only to its own
// output slot; under that contract the result set is identical for every
// thread count, and callers reduce the slots in index order afterwards.
template <class F>
void parallel_for_index(int64_t count, int threads, F&& body) {
#ifdef _OPENMP
  if (threads > 1 && count > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int64_t i = 0; i < count; ++i) body(i);
    return;
  }
#endif
  (void)threads;
  for (int64_t i = 0; i < count; ++i) body(i);
}

// Serial reference twin, kept for tests and benchmarks that compare against
// the OpenMP path.
template <class F>
void serial_for_index(int64_t count, F&& body) {
  for (int64_t i = 0; i < count; ++i) body(i);
}

}  // namespace polya
