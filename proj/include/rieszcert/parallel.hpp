#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rieszcert {

/// Runs body(i) for i in [0, count) on up to `width` threads (interleaved assignment).
/// Callers write into per-index slots and reduce afterwards in index order, so results do not
/// depend on width. The exception of the smallest failing index is rethrown.
inline void parallel_for(std::size_t count, int width, const std::function<void(std::size_t)>& body) {
  if (width <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(width), count);
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rieszcert
