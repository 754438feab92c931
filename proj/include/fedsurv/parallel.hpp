#pragma once

// Small OpenMP convenience layer. Parallel reductions in this project are
// block-deterministic: rows are cut into fixed-size blocks, each block is
// accumulated in plain order, and block partials are combined in block-index
// order. The result is bit-identical for any thread count.

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fedsurv {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int thread_num() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

// Fixed block size for deterministic reductions, independent of thread count.
inline constexpr std::ptrdiff_t kReduceBlock = 2048;

inline std::ptrdiff_t num_blocks(std::ptrdiff_t n, std::ptrdiff_t block = kReduceBlock) {
  return n <= 0 ? 0 : (n + block - 1) / block;
}

}  // namespace fedsurv
