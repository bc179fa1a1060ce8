#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pvsa {

inline int resolve_threads(int jobs) {
  if (jobs > 0) return jobs;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pvsa
