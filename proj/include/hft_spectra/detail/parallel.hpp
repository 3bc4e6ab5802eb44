#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace hft_spectra::detail {

/// Runs body(i) for i in [0, count) on up to `width` threads. Every index is
/// attempted; the returned vector holds the exception (if any) per index.
template <class Body>
std::vector<std::exception_ptr> parallel_for(std::size_t count, std::size_t width, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  width = std::clamp<std::size_t>(width, 1, std::max<std::size_t>(count, 1));
  if (width == 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> pool;
  pool.reserve(width - 1);
  for (std::size_t t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return errors;
}

inline std::size_t default_parallelism() {
  if (const char* env = std::getenv("HFT_SPECTRA_PARALLELISM")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hft_spectra::detail
