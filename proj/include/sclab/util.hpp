#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace sclab::util {

/// Pairwise (tree) summation over the index order of `v`.
///
/// The reduction tree depends only on v.size(), never on how the entries were
/// produced, so concurrent producers that store into fixed slots reduce to a
/// bitwise-identical total. Error grows like O(log n · eps) instead of the
/// O(n · eps) of a running sum, which matters for the near-cancelling
/// odd-observable integrals (targets at the 1e-10 level).
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

/// Runs fn(i) for i in [0, n) on `workers` threads. Each task writes only to
/// its own index in caller-owned storage, so the result is independent of the
/// thread count and of scheduling; combined with pairwise_sum this gives
/// bitwise-identical reductions at any concurrency level.
inline void parallel_for_indexed(std::size_t n, unsigned workers,
                                 const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(
        std::min<std::size_t>(workers, n));
    pool.reserve(spawn - 1);
    for (unsigned t = 0; t + 1 < spawn; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
}

/// Default worker count for internal pools (>=1).
inline unsigned default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// Shortest decimal form that round-trips a double exactly: 17 significant
/// digits, the CSV/JSON number format used everywhere.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// FNV-1a 64-bit digest; stable, dependency-free content hash for configs.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sclab::util
