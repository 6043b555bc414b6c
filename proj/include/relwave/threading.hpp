#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

// Deterministic trial parallelism: every trial derives its own RNG stream
// from (master seed, trial index) and writes only its own result slot, so
// the aggregate is the same multiset of outcomes regardless of the thread
// count. Aggregation passes stay serial.

namespace relwave {

template <typename Fn>
inline void parallel_for_trials(std::size_t n_trials, unsigned n_threads, Fn&& fn) {
    if (n_threads <= 1 || n_trials < 2) {
        for (std::size_t i = 0; i < n_trials; ++i) fn(i);
        return;
    }
    const unsigned workers = std::min<std::size_t>(n_threads, n_trials);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n_trials; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace relwave
