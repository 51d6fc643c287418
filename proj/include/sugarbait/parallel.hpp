#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sugarbait {

/// Resolves a requested worker count; 0 means one per hardware thread.
inline unsigned resolve_workers(unsigned requested)
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body)
{
    workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation; the result depends only on the order of `values`.
template <class It>
double pairwise_sum(It first, It last)
{
    const auto n = static_cast<std::size_t>(last - first);
    if (n <= 8) {
        double s = 0.0;
        for (; first != last; ++first)
            s += *first;
        return s;
    }
    const auto mid = first + static_cast<std::ptrdiff_t>(n / 2);
    return pairwise_sum(first, mid) + pairwise_sum(mid, last);
}

} // namespace sugarbait
