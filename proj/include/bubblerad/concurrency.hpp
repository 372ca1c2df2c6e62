#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bubblerad {

/// Number of worker threads to use when the caller did not ask for one.
inline std::size_t default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Each index is
/// processed exactly once; results must be written to per-index slots by
/// the caller. The first exception thrown is rethrown after all workers
/// finish.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& fn) {
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace bubblerad
