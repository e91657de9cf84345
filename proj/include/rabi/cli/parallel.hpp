#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace rabi::cli {

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Each worker pulls
/// the next index from a shared counter; fn must write only to slot i.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace rabi::cli
