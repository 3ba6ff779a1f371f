#include "parallel.hpp"

#include <atomic>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kprab {

namespace {
std::atomic<int> g_threads{0};

// Nested regions (verify cases -> operator loops) run their inner loops serially.
[[maybe_unused]] const bool g_levels_set = [] {
#ifdef _OPENMP
    omp_set_max_active_levels(1);
#endif
    return true;
}();
}

void set_thread_count(int n) {
    g_threads.store(n < 0 ? 0 : n);
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
    omp_set_max_active_levels(1);
#endif
}

int thread_count() {
#ifdef _OPENMP
    const int n = g_threads.load();
    return n > 0 ? n : omp_get_max_threads();
#else
    return 1;
#endif
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t chunk) {
    std::exception_ptr err;
    std::mutex err_mu;
    std::atomic<bool> failed{false};
    const auto count = static_cast<long long>(n);
    const int ch = static_cast<int>(chunk == 0 ? 1 : chunk);
    (void)ch;
#pragma omp parallel for schedule(dynamic, ch)
    for (long long i = 0; i < count; ++i) {
        if (failed.load(std::memory_order_relaxed))
            continue;
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err)
                err = std::current_exception();
            failed.store(true);
        }
    }
    if (err)
        std::rethrow_exception(err);
}

}  // namespace kprab
