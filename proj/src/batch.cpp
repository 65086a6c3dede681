#include "quadric/batch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace quadric::batch {

namespace {
constexpr std::size_t kBlock = 512;
}

int max_threads() {
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("QUADRIC_NUM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) threads = std::min(threads, cap);
    } catch (...) {
      // unparsable cap is ignored
    }
  }
  return std::max(threads, 1);
}

double pairwise_sum(std::span<const double> values, Exec exec) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks);
  for_each_index(blocks, exec, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(lo + kBlock, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    partial[b] = s;
  });
  // halving tree over the block sums; shape depends only on `blocks`
  std::size_t m = blocks;
  while (m > 1) {
    const std::size_t half = (m + 1) / 2;
    for (std::size_t j = 0; j < m / 2; ++j) partial[j] = partial[2 * j] + partial[2 * j + 1];
    if (m % 2 == 1) partial[m / 2] = partial[m - 1];
    m = half;
  }
  return partial[0];
}

NormStats norm_stats(std::span<const double> norms, Exec exec) {
  NormStats stats;
  stats.count = norms.size();
  if (norms.empty()) return stats;
  double mx = 0.0;
  std::vector<double> squares(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    mx = std::max(mx, norms[i]);
    squares[i] = norms[i] * norms[i];
  }
  stats.max = mx;
  stats.rms = std::sqrt(pairwise_sum(squares, exec) / static_cast<double>(norms.size()));
  return stats;
}

}  // namespace quadric::batch
