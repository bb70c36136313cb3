#pragma once

// Include this instead of <omp.h>; lets the code build without OpenMP.

#if defined(_OPENMP)
#include <omp.h>
namespace hlz {
inline constexpr bool kUseOmp = true;
}  // namespace hlz
#else
#pragma GCC diagnostic ignored "-Wunknown-pragmas"
namespace hlz {
inline constexpr bool kUseOmp = false;
}  // namespace hlz
inline int omp_get_thread_num() { return 0; }
inline int omp_get_max_threads() { return 1; }
inline void omp_set_num_threads(int) {}
#endif
