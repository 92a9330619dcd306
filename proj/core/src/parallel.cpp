#include "hmono/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hmono/types.hpp"

namespace hmono {

std::size_t thread_count() {
  if (const char* env = std::getenv("HMONO_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  const std::size_t workers = std::min(thread_count(), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      body(b * kBlockSize, std::min(count, (b + 1) * kBlockSize));
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        body(b * kBlockSize, std::min(count, (b + 1) * kBlockSize));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

double pairwise_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
  return pairwise_range(values.data(), values.size());
}

Matrix fd_jacobian(const MapFn& fn, const Vector& x, double step) {
  if (!(step > 0.0)) throw InputError("fd_jacobian: step must be positive");
  const Eigen::Index n = x.size();
  const Vector f0 = fn(x);
  Matrix jac(f0.size(), n);
  Vector xp = x;
  Vector xm = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    xp(j) = x(j) + step;
    xm(j) = x(j) - step;
    jac.col(j) = (fn(xp) - fn(xm)) / (2.0 * step);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return jac;
}

}  // namespace hmono
