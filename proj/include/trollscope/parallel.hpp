#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trollscope {

// Every data-parallel kernel takes an Exec. The serial path is the reference
// implementation; the parallel path must produce bit-identical results, which
// the tests check. Kernels achieve this by writing each iteration's result to
// its own slot and reducing afterwards in index order.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Runs body(i) for i in [0, n). The first exception thrown by any iteration
// is rethrown on the calling thread once the loop has finished.
template <typename Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace trollscope
