#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace sdlab {

/// 0 means "one per hardware thread".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [first, last] into contiguous blocks, runs `fn(lo, hi)` (inclusive
/// bounds, returns std::vector<T>) on each block and concatenates the results
/// in block order, so output never depends on the thread count.
template <typename T, typename Fn>
std::vector<T> parallel_ranges(std::uint64_t first, std::uint64_t last, unsigned threads, Fn fn) {
  if (last < first) return {};
  const std::uint64_t n = last - first + 1;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(1, n / 4096)));
  if (workers <= 1) return fn(first, last);

  std::vector<std::vector<T>> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = first + n * w / workers;
    const std::uint64_t hi = first + n * (w + 1) / workers - 1;
    pool.emplace_back([&, w, lo, hi] {
      try {
        parts[w] = fn(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// Runs fn(i) for i in [0, count) and stores results by index.
template <typename T, typename Fn>
std::vector<T> parallel_indexed(std::size_t count, unsigned threads, Fn fn) {
  std::vector<T> out(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace sdlab
