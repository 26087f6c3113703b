#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "wekac/error.hpp"

namespace wekac {

/// Execution settings threaded through every scan.
///
/// Results depend on `chunk_size` (it fixes the reduction tree) but never on
/// `workers`: chunks are reduced in index order regardless of which thread
/// produced them.
struct ExecContext {
  unsigned workers = 1;
  std::uint64_t chunk_size = std::uint64_t{1} << 16;

  /// Worker count from WEKAC_WORKERS (falls back to 1).
  static ExecContext from_env();

  void validate() const;
};

namespace detail {

template <class T, class Merge>
T pairwise_merge(std::vector<T>& parts, std::size_t lo, std::size_t hi, Merge& merge) {
  if (hi - lo == 1) return std::move(parts[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  T left = pairwise_merge(parts, lo, mid, merge);
  T right = pairwise_merge(parts, mid, hi, merge);
  return merge(std::move(left), std::move(right));
}

}  // namespace detail

/// Splits [lo, hi] into fixed chunks, evaluates `body(chunk_lo, chunk_hi)` for
/// each (possibly on several threads) and combines the partial results with a
/// balanced pairwise tree in chunk order.
template <class T, class Body, class Merge>
T chunked_reduce(std::uint64_t lo, std::uint64_t hi, const ExecContext& ctx, Body body,
                 Merge merge, T empty) {
  ctx.validate();
  if (hi < lo) return empty;
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t n_chunks = (span + ctx.chunk_size - 1) / ctx.chunk_size;
  std::vector<T> parts(n_chunks, empty);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t a = lo + c * ctx.chunk_size;
    const std::uint64_t b = (hi - a < ctx.chunk_size) ? hi : a + ctx.chunk_size - 1;
    parts[c] = body(a, b);
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(ctx.workers, n_chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t c = next.fetch_add(1);
          if (c >= n_chunks) return;
          try {
            run_chunk(c);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(n_chunks);
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return detail::pairwise_merge(parts, 0, parts.size(), merge);
}

/// Compensated (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace wekac
