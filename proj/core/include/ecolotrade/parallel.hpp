#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ecolotrade {

namespace detail {
inline thread_local bool inside_parallel_worker = false;
}

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks over
/// hardware threads when `parallel` is set and n is large enough to pay for
/// the thread spawns; nested calls from inside a worker run serially instead
/// of oversubscribing. Callers must write results by index only; combined
/// with pre-derived per-index RNG seeds this keeps results identical whether
/// the loop runs serially or not.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, bool parallel = true) {
    const unsigned hw = std::thread::hardware_concurrency();
    if (!parallel || detail::inside_parallel_worker || n < 2 || hw < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(hw, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            detail::inside_parallel_worker = true;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace ecolotrade
