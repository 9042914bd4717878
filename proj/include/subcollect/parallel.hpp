#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace subcollect {

/// Runs body(i) for i in [0, n) on up to `workers` threads, each owning a
/// contiguous block. Results must be written to per-index slots so the
/// outcome does not depend on the worker count. The first exception thrown
/// by any worker is rethrown after all of them finish.
template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
    const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t lo = n * t / threads;
            const std::size_t hi = n * (t + 1) / threads;
            pool.emplace_back([&, t, lo, hi] {
                try {
                    for (std::size_t i = lo; i < hi; ++i) body(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace subcollect
