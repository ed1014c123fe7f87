#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcb {

inline bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Data-parallel loop over [0, n). body(i) must be independent per index and
// write only to its own slot, so the parallel result is bit-identical to the
// serial one. `parallel = false` is the serial reference path used in tests
// and the benchmark.
template <typename Body>
void parallel_for(std::size_t n, bool parallel, const Body& body) {
#ifdef _OPENMP
  if (parallel && n > 1) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)parallel;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace lcb
