#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace skelhedge {

// Runs fn(i) for i in [0, n) over contiguous index blocks, one per worker.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(n, threads < 1 ? 1 : threads));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

// Fixed-shape pairwise summation; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct SampleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double std_error = 0.0;
};

inline SampleStats sample_stats(std::span<const double> x) {
    SampleStats s;
    s.count = x.size();
    if (x.empty()) return s;
    s.mean = pairwise_sum(x) / static_cast<double>(x.size());
    if (x.size() > 1) {
        std::vector<double> sq(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - s.mean) * (x[i] - s.mean);
        s.std_dev = std::sqrt(pairwise_sum(sq) / static_cast<double>(x.size() - 1));
        s.std_error = s.std_dev / std::sqrt(static_cast<double>(x.size()));
    }
    return s;
}

}  // namespace skelhedge
