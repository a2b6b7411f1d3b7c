#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tessforest {

inline bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Serial reference loop. The parallel kernel below must produce identical
// results because every iteration works on its own derived rng stream and
// writes only to its own index; tests compare the two paths bit for bit.
template <class F>
void serial_for_index(std::size_t n, F&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class F>
void parallel_for_index(std::size_t n, int threads, F&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        serial_for_index(n, std::forward<F>(fn));
        return;
    }
#ifdef _OPENMP
    std::exception_ptr err;
    std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    serial_for_index(n, std::forward<F>(fn));
#endif
}

} // namespace tessforest
