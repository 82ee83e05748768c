#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace blab {

/// Runs fn(chunk) for chunk in [0, n_chunks). Work is split into fixed
/// chunks whose boundaries never depend on the thread count, so any
/// reduction done per chunk and merged in chunk order is bitwise
/// reproducible.
template <class Fn>
void for_each_chunk(std::size_t n_chunks, unsigned threads, Fn&& fn)
{
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  const unsigned nt = std::min<std::size_t>(threads, n_chunks);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t c = t; c < n_chunks; c += nt) fn(c);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Pairwise (tree) sum of per-chunk partials in fixed order.
template <class T>
T pairwise_sum(std::vector<T> parts)
{
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

inline unsigned default_threads()
{
  const unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

}  // namespace blab
