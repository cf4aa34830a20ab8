#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tripower {

// Thrown when a request exceeds the configured memory/size budget.
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumaier-compensated accumulator. Partial sums combine deterministically:
// merging (s, c) pairs in a fixed order yields bit-stable totals regardless
// of how the work was split across threads.
struct Accum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    void add(const Accum& other) {
        add(other.s);
        add(other.c);
    }

    double value() const { return s + c; }
};

// Runs fn(block) for block = 0..nblocks-1. Work is claimed dynamically, so
// each fn must write only to per-block state; results are then independent
// of the thread count. The first worker exception is rethrown after join.
template <typename F>
void parallel_for_blocks(std::int64_t nblocks, int threads, F&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || nblocks <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    threads = static_cast<int>(std::min<std::int64_t>(threads, nblocks));
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
                if (b >= nblocks || failed.load(std::memory_order_relaxed)) return;
                try {
                    fn(b);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// Shortest round-trip decimal form; stable across runs for identical doubles.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    // trim to shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
        if (std::strtod(probe, nullptr) == x) return probe;
    }
    return buf;
}

inline std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("isqrt64: negative argument");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Exact binomial coefficient in int64; n capped where C(n, n/2) fits.
inline std::int64_t binomial(int n, int k) {
    if (n < 0) throw std::invalid_argument("binomial: n < 0");
    if (n > 66) throw std::overflow_error("binomial: n too large for int64");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t num = 1;
    for (int i = 1; i <= k; ++i) {
        num = num * (n - k + i) / i;  // exact at every step: C(n-k+i, i)
    }
    return num;
}

}  // namespace tripower
