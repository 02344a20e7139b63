#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace balksim {

/// Run fn(i) for i in [0, n) across up to `jobs` threads. Work items pull
/// from a shared counter; callers keep determinism by writing result i
/// into a preallocated slot i, so completion order never matters. The
/// first exception thrown by any item is rethrown after all threads join.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
    if (n < 0) throw std::invalid_argument("parallel_for: n must be >= 0");
    if (jobs < 1) throw std::invalid_argument("parallel_for: jobs must be >= 1");
    if (n == 0) return;
    if (jobs == 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    const int n_threads = jobs < n ? jobs : n;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace balksim
