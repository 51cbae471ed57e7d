#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spde_lrt {

// 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Splits [0, count) into fixed chunks and evaluates fn(begin, end) for each one.
// Chunk boundaries do not depend on the worker count and results come back in
// chunk order, so any order-sensitive reduction over them is reproducible.
template <class Result, class Fn>
std::vector<Result> map_chunks(std::int64_t count, std::int64_t chunk, unsigned workers, Fn&& fn) {
  const std::int64_t n_chunks = count <= 0 ? 0 : (count + chunk - 1) / chunk;
  std::vector<Result> out(static_cast<std::size_t>(n_chunks));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto body = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      const std::int64_t begin = c * chunk;
      const std::int64_t end = std::min(count, begin + chunk);
      try {
        out[static_cast<std::size_t>(c)] = fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks, std::memory_order_relaxed);
        return;
      }
    }
  };

  const unsigned w = std::min<unsigned>(resolve_workers(workers),
                                        static_cast<unsigned>(std::max<std::int64_t>(n_chunks, 1)));
  if (w <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned i = 0; i < w; ++i) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Per-item values in item order.
template <class Fn>
std::vector<double> map_trials(std::int64_t count, unsigned workers, Fn&& fn) {
  constexpr std::int64_t kChunk = 64;
  auto chunks = map_chunks<std::vector<double>>(count, kChunk, workers,
                                                [&](std::int64_t b, std::int64_t e) {
                                                  std::vector<double> v;
                                                  v.reserve(static_cast<std::size_t>(e - b));
                                                  for (std::int64_t j = b; j < e; ++j) v.push_back(fn(j));
                                                  return v;
                                                });
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace spde_lrt
