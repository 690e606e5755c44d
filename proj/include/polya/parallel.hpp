#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace polya {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> n{0};
    return n;
}
}  // namespace detail

/// Worker count used by scans and verifications; 0 means hardware
/// concurrency.
inline void set_worker_threads(unsigned n) { detail::thread_setting() = n; }

inline unsigned worker_threads() {
    const unsigned n = detail::thread_setting();
    if (n != 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, n) into contiguous chunks, runs `work(begin, end)` on each
/// chunk in its own thread and returns the results in chunk order, so
/// reductions over them are deterministic.
template <class Work>
auto parallel_chunks(std::size_t n, Work&& work) {
    using Result = decltype(work(std::size_t{}, std::size_t{}));
    const std::size_t min_chunk = 4096;
    const std::size_t threads = std::clamp<std::size_t>(n / min_chunk, 1, worker_threads());
    std::vector<Result> results(threads);
    if (threads == 1) {
        results[0] = work(std::size_t{0}, n);
        return results;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t begin = n * t / threads;
            const std::size_t end = n * (t + 1) / threads;
            pool.emplace_back([&, t, begin, end] {
                try {
                    results[t] = work(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace polya
