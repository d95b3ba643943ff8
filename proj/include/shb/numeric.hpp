#ifndef SHB_NUMERIC_HPP
#define SHB_NUMERIC_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace shb {

/// Pairwise summation in fixed index order. The recursion tree depends only
/// on the length, so the result is identical no matter how the values were
/// produced (serial or by N workers writing into their own slots).
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// Static-partition parallel loop over [0, n). Each index is processed by
/// exactly one worker; callers must write results into per-index slots so the
/// outcome is independent of the worker count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace shb

#endif  // SHB_NUMERIC_HPP
