#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hmono {

/// Worker count: HMONO_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Fixed work-block size. Block boundaries never depend on the thread count,
/// which keeps every reduction below bit-reproducible.
inline constexpr std::size_t kBlockSize = 1024;

/// Runs body(begin, end) over [0, count) in blocks of kBlockSize.
void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// Runs body(i) for every i in [0, count).
template <class F>
void parallel_for(std::size_t count, F&& body) {
  parallel_blocks(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

/// Pairwise-tree sum of values in index order.
double pairwise_sum(const std::vector<double>& values);

/// Sum of term(i) over [0, count): per-block sums combined by pairwise_sum.
/// Result is identical for any thread count.
template <class F>
double ordered_sum(std::size_t count, F&& term) {
  std::vector<double> values(count);
  parallel_for(count, [&](std::size_t i) { values[i] = term(i); });
  return pairwise_sum(values);
}

}  // namespace hmono
