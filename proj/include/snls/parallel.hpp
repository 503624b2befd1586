#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace snls {

// Index-parallel map. Item 0 runs on the calling thread before workers
// start, so lazily created shared resources (FFT plans) are built
// single-threaded. Each index owns its output slot: results are
// independent of the thread schedule.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    body(0);
    if (count == 1) return;
    const int workers = std::max(1, threads);
    if (workers == 1) {
        for (std::size_t i = 1; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{1};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(workers, count - 1);
    for (int w = 0; w < spawn; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace snls
