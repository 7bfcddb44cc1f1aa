#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nightforge {

/// Run fn(i) for i in [0, n) on up to `workers` threads. fn must be
/// exception-free (callers capture failures into their own slots); tasks
/// share nothing but the index counter, so results cannot depend on the
/// worker count.
inline void parallel_for_indexed(std::size_t n, int workers,
                                 const std::function<void(std::size_t)>& fn) {
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        threads.emplace_back([&next, n, &fn] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (std::thread& t : threads) t.join();
}

}  // namespace nightforge
