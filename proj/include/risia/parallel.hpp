#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace risia {

// Runs f(i) for i in [0, n). Work is handed out in small blocks through a
// shared counter, so callers must make f(i) independent of execution order
// (each index derives its own RNG substream).
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t block = (n / (static_cast<std::size_t>(threads) * 8)) + 1;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(block);
            if (begin >= n || failed.load(std::memory_order_relaxed)) return;
            const std::size_t end = std::min(begin + block, n);
            try {
                for (std::size_t i = begin; i < end; ++i) f(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
}

inline unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace risia
