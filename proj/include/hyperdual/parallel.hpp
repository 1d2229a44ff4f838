#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hyperdual {

/// Worker cap: HYPERDUAL_THREADS if set and positive, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("HYPERDUAL_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

/// Runs body(chunk) for chunk in [0, nchunks) on up to `workers` threads.
/// Results must be written per chunk; the caller reduces them in chunk order,
/// so the outcome does not depend on the worker count.
template <class Body>
void for_each_chunk(int nchunks, Body&& body, int workers = worker_count()) {
    workers = std::max(1, std::min(workers, nchunks));
    if (workers == 1) {
        for (int c = 0; c < nchunks; ++c) body(c);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int c = next++; c < nchunks; c = next++) {
                    try {
                        body(c);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = nchunks;
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

/// Pairwise (tree) sum in index order.
template <class T>
T pairwise_sum(const std::vector<T>& xs, std::size_t lo, std::size_t hi) {
    if (hi <= lo) return T{};
    if (hi - lo == 1) return xs[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
    return pairwise_sum(xs, 0, xs.size());
}

}  // namespace hyperdual
