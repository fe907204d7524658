#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scarpst {

// worker count: SCARPST_THREADS env var, else hardware concurrency
inline int max_threads()
{
    if (const char* env = std::getenv("SCARPST_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int& thread_override()
{
    static int value = 0;
    return value;
}

// programmatic override (0 restores the environment-derived default)
inline void set_thread_override(int n) { thread_override() = n; }

inline int active_threads() { return thread_override() > 0 ? thread_override() : max_threads(); }

// Deterministic parallel loop over n independent iterations. Each iteration
// must write only to its own output slots; results are then identical for
// every thread count. BLAS stays single-threaded underneath (see linalg.hpp).
template <class F>
void parallel_for(long n, F&& body, int max_workers = 0)
{
    long workers = active_threads();
    if (max_workers > 0) workers = std::min<long>(workers, max_workers);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (long w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const long i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace scarpst
