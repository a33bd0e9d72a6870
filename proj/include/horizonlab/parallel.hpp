#pragma once
// Deterministic work distribution: each index is an independent unit with
// its own keyed random stream, results land in preassigned slots, so the
// outcome is identical for any worker count.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace horizonlab {

/// Worker cap from HORIZONLAB_THREADS (>= 1), else hardware concurrency.
inline int worker_count()
{
    if (const char* env = std::getenv("HORIZONLAB_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1)
            return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n) across at most `workers` threads.
inline void parallel_for(std::int64_t n, int workers,
                         const std::function<void(std::int64_t)>& fn)
{
    if (n <= 0)
        return;
    const int used = static_cast<int>(std::min<std::int64_t>(workers, n));
    if (used <= 1) {
        for (std::int64_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t i = w; i < n; i += used)
                    fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace horizonlab
