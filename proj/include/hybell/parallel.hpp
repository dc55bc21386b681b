#pragma once

#include <algorithm>
#include <future>
#include <thread>
#include <vector>

// Bounded-concurrency parallel map over an index range with deterministic
// aggregation: results land in the output vector by index, so downstream
// reductions are independent of thread scheduling.

namespace hybell {

template <class Fn>
auto parallel_map(int n, Fn&& fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<R> out(static_cast<std::size_t>(std::max(n, 0)));
  const int wave =
      static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int start = 0; start < n; start += wave) {
    const int end = std::min(n, start + wave);
    std::vector<std::future<R>> futs;
    futs.reserve(static_cast<std::size_t>(end - start));
    for (int i = start; i < end; ++i)
      futs.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
    for (int i = start; i < end; ++i)
      out[static_cast<std::size_t>(i)] = futs[static_cast<std::size_t>(i - start)].get();
  }
  return out;
}

}  // namespace hybell
