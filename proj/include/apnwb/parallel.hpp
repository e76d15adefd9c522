#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace apnwb::par {

namespace detail {
inline std::atomic<unsigned>& worker_override() {
    static std::atomic<unsigned> v{0};
    return v;
}
} // namespace detail

/// Worker count resolution: explicit set_workers() (CLI flag) wins, then the
/// APNWB_THREADS environment variable, then hardware concurrency.
inline unsigned workers() {
    unsigned v = detail::worker_override().load(std::memory_order_relaxed);
    if (v) return v;
    if (const char* env = std::getenv("APNWB_THREADS")) {
        long p = std::strtol(env, nullptr, 10);
        if (p > 0) return static_cast<unsigned>(p);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

inline void set_workers(unsigned n) {
    detail::worker_override().store(n, std::memory_order_relaxed);
}

/// Splits [begin, end) into one contiguous chunk per worker and runs
/// fn(worker_index, lo, hi) on each. Caller merges per-worker results in
/// worker order so output is independent of scheduling.
template <typename Fn>
void for_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) {
    const std::uint64_t total = end > begin ? end - begin : 0;
    unsigned w = workers();
    if (total < 2 * w) w = 1;
    if (w <= 1) {
        fn(0u, begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    const std::uint64_t chunk = (total + w - 1) / w;
    for (unsigned i = 0; i < w; ++i) {
        std::uint64_t lo = begin + chunk * i;
        std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
        if (lo >= hi) break;
        pool.emplace_back([&fn, i, lo, hi] { fn(i, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

} // namespace apnwb::par
