#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace superl {

/// Worker count: min(hardware, SUPERL_THREADS if set). Always >= 1.
inline int thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw == 0 ? 1 : static_cast<int>(hw);
    if (const char* env = std::getenv("SUPERL_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v < 1024) n = std::min<long>(n, v);
    }
    return n;
}

/// Runs fn(row) for row in [0, rows). Partitioning is by contiguous blocks, so
/// results must not depend on execution order (callers write disjoint slots).
inline void parallel_rows(int rows, const std::function<void(int)>& fn) {
    int nt = std::min(thread_count(), rows > 0 ? rows : 1);
    if (nt <= 1 || rows < 64) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        int lo = static_cast<int>(static_cast<long long>(rows) * t / nt);
        int hi = static_cast<int>(static_cast<long long>(rows) * (t + 1) / nt);
        pool.emplace_back([lo, hi, &fn] {
            for (int r = lo; r < hi; ++r) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

/// Fixed-shape pairwise reduction: the summation tree depends only on n, never
/// on thread count, so totals are bitwise reproducible run to run.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace superl
