#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hypercone {

/// Number of worker threads requested via HYPERCONE_THREADS, or 1 when unset.
inline int env_thread_count() {
    if (const char* s = std::getenv("HYPERCONE_THREADS")) {
        int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return 1;
}

/// Static block partition of [0, count) over `threads` workers. Results must
/// be written to disjoint, index-addressed slots so the outcome is identical
/// for any thread count. The first exception thrown by a worker is rethrown
/// on the calling thread after the join.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    std::size_t chunk = (count + nworkers - 1) / nworkers;
    std::mutex err_mu;
    std::exception_ptr first_error;
    for (std::size_t w = 0; w < nworkers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, &err_mu, &first_error, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hypercone
