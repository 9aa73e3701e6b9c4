#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hiergap {

// The hot certification loops (pair-marginal counting, subset scans,
// moment-matrix assembly, brute-force sweeps) come in a serial reference
// version and an OpenMP version. The serial one is the oracle the parallel
// one is tested against; tools/bench.cpp times both. All kernels are exact,
// so the merged parallel result must equal the serial result bit for bit.
enum class ExecMode { Serial, Parallel };

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace hiergap
