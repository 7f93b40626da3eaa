#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace csphere {

// Usage errors map to CLI exit 1, computation errors to exit 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline int& thread_count_override() {
    static int n = 0;
    return n;
}

inline void set_thread_count(int n) { thread_count_override() = n; }

inline int thread_count() {
    if (int n = thread_count_override(); n > 0) return n;
    if (const char* env = std::getenv("CSPHERE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [begin, end). Work is split into fixed contiguous
// blocks pulled from an atomic ticket, so results must not depend on
// execution order (callers either write disjoint slots or reduce over
// per-block partials merged in block order).
template <class Fn>
void parallel_for(std::int64_t begin, std::int64_t end, Fn&& fn) {
    const std::int64_t n = end - begin;
    if (n <= 0) return;
    const int threads = std::min<std::int64_t>(thread_count(), n);
    if (threads <= 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::int64_t nblocks = std::min<std::int64_t>(n, threads * 16);
    const std::int64_t block = (n + nblocks - 1) / nblocks;
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            const std::int64_t lo = begin + b * block;
            const std::int64_t hi = std::min(end, lo + block);
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

// Deterministic parallel reduction: [begin, end) is split into a fixed
// number of contiguous blocks (independent of the thread count);
// block(lo, hi) -> T runs in parallel and partials merge left to right,
// so even floating-point reductions are bitwise reproducible.
template <class T, class BlockFn, class MergeFn>
T parallel_reduce(std::int64_t begin, std::int64_t end, T init, BlockFn&& block,
                  MergeFn&& merge) {
    const std::int64_t n = end - begin;
    if (n <= 0) return init;
    const std::int64_t nblocks = std::min<std::int64_t>(n, 64);
    const std::int64_t step = (n + nblocks - 1) / nblocks;
    std::vector<T> parts(static_cast<std::size_t>(nblocks), init);
    parallel_for(0, nblocks, [&](std::int64_t b) {
        const std::int64_t lo = begin + b * step;
        const std::int64_t hi = std::min(end, lo + step);
        parts[static_cast<std::size_t>(b)] = block(lo, hi);
    });
    T acc = init;
    for (const T& p : parts) acc = merge(acc, p);
    return acc;
}

// Pairwise (tree) summation; result is independent of thread count because
// it is always evaluated over the full index range in the same order.
template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 16) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <class T, class Fn>
T pairwise_sum_fn(std::int64_t lo, std::int64_t hi, Fn&& fn) {
    if (hi - lo <= 16) {
        T s{};
        for (std::int64_t i = lo; i < hi; ++i) s += fn(i);
        return s;
    }
    const std::int64_t mid = lo + (hi - lo) / 2;
    return pairwise_sum_fn<T>(lo, mid, fn) + pairwise_sum_fn<T>(mid, hi, fn);
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ComputationError("linear_fit: need at least two samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw ComputationError("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::array<double, 3> random_unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        const double a = gauss(rng), b = gauss(rng), c = gauss(rng);
        const double r = std::sqrt(a * a + b * b + c * c);
        if (r > 1e-12) return {a / r, b / r, c / r};
    }
}

// e(z) = exp(2 pi i z)
inline std::complex<double> unit_phase(double z) {
    const double w = 2.0 * M_PI * z;
    return {std::cos(w), std::sin(w)};
}

// frac(m * t) for exact integer m; long double keeps the phase error below
// 2^-23 for m*t up to 2^40, which is enough for the sum sizes used here.
inline double frac_mul(std::uint64_t m, double t) {
    long double p = static_cast<long double>(m) * static_cast<long double>(t);
    long double f = p - std::floor(p);
    return static_cast<double>(f);
}

inline double dist_to_int(double x) {
    return std::abs(x - std::round(x));
}

// 17 significant digits round-trips a double exactly; '.' decimal always.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace csphere
