#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quadric::batch {

/// Execution policy for batch kernels. Every parallel kernel has a serial
/// twin that produces bit-identical results; tests compare the two.
enum class Exec { serial, parallel };

/// Worker count for parallel kernels, capped by QUADRIC_NUM_THREADS.
int max_threads();

/// Runs fn(i) for i in [0, n). Iterations must be independent. An exception
/// thrown by any iteration is rethrown after the loop completes.
template <typename F>
void for_each_index(std::size_t n, Exec exec, F&& fn) {
#ifdef _OPENMP
  if (exec == Exec::parallel && n > 1) {
    std::exception_ptr err = nullptr;
    const int threads = max_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(quadric_batch_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  (void)exec;
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Fixed-order pairwise summation: sequential sums over fixed-size blocks,
/// then a halving tree over the block sums. The reduction order is a
/// function of the input length only, so serial and parallel runs (any
/// thread count) return the same bits.
double pairwise_sum(std::span<const double> values, Exec exec = Exec::serial);

struct NormStats {
  double max = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
};

/// max and root-mean-square of a vector of nonnegative per-point norms.
NormStats norm_stats(std::span<const double> norms, Exec exec = Exec::serial);

}  // namespace quadric::batch
