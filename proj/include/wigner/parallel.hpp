#pragma once

#if defined(_OPENMP)
#include <omp.h>
#define WIGNER_PARALLEL_FOR _Pragma("omp parallel for schedule(static)")
#else
#define WIGNER_PARALLEL_FOR
#endif

namespace wigner {

/// Threads used by the parallel kernels (1 when built without OpenMP).
inline int thread_count() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int n) {
#if defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace wigner
