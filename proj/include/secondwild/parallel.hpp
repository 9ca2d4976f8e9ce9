#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace secondwild {

/// 0 means "use SECONDWILD_THREADS, else 1".
[[nodiscard]] std::size_t resolve_threads(std::size_t requested);

/// Calls fn(i) for i in [0, n) on `threads` workers with a fixed striped
/// assignment. Callers write results by index, so output never depends on the
/// thread count. The exception from the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::size_t> error_index(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                try {
                    fn(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                    error_index[t] = i;
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    std::size_t first = threads;
    for (std::size_t t = 0; t < threads; ++t) {
        if (errors[t] && (first == threads || error_index[t] < error_index[first])) first = t;
    }
    if (first != threads) std::rethrow_exception(errors[first]);
}

}  // namespace secondwild
