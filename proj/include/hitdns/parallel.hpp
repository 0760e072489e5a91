#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hitdns {

/// Splits [0, count) into one contiguous chunk per worker and calls
/// body(begin, end) on each. The first exception thrown by any worker is
/// rethrown on the calling thread after all workers finish.
template <typename Body>
void parallel_for(std::ptrdiff_t count, int workers, Body&& body) {
  if (count <= 0) return;
#ifdef _OPENMP
  if (workers > 1 && count > 1) {
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel num_threads(workers)
    {
      const std::ptrdiff_t nthreads = omp_get_num_threads();
      const std::ptrdiff_t tid = omp_get_thread_num();
      const std::ptrdiff_t begin = count * tid / nthreads;
      const std::ptrdiff_t end = count * (tid + 1) / nthreads;
      try {
        if (begin < end) body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return;
  }
#endif
  (void)workers;
  body(std::ptrdiff_t{0}, count);
}

}  // namespace hitdns
