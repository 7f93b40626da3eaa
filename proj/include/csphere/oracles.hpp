#pragma once

#include <mpfr.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "csphere/floor_pow.hpp"
#include "csphere/rational.hpp"
#include "csphere/util.hpp"

// Deliberately naive reference computations used by tests and calibration.
// They share only the definitional floor_pow primitive with production code:
// no FFT, no caching, no quadrature machinery, single-threaded.
namespace csphere::oracles {

// Signed representation counts r_c(lambda) for all lambda <= lmax, by a
// direct triple loop over coordinate magnitudes with sign multiplicities.
inline std::vector<std::int64_t> brute_table(const RationalExponent& c,
                                             std::int64_t lmax) {
    if (lmax > 200'000)
        throw UsageError("brute_table: horizon too large for the brute oracle");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(lmax) + 1, 0);
    std::vector<std::int64_t> f;  // floor(m^c) while <= lmax
    for (std::int64_t m = 0;; ++m) {
        const std::int64_t v = floor_pow(m, c);
        if (v > lmax) break;
        f.push_back(v);
    }
    const auto mmax = static_cast<std::int64_t>(f.size()) - 1;
    for (std::int64_t m1 = 0; m1 <= mmax; ++m1) {
        const std::int64_t w1 = m1 == 0 ? 1 : 2;
        const std::int64_t q1 = f[static_cast<std::size_t>(m1)];
        if (q1 > lmax) break;
        for (std::int64_t m2 = 0; m2 <= mmax; ++m2) {
            const std::int64_t q12 = q1 + f[static_cast<std::size_t>(m2)];
            if (q12 > lmax) break;
            const std::int64_t w12 = w1 * (m2 == 0 ? 1 : 2);
            for (std::int64_t m3 = 0; m3 <= mmax; ++m3) {
                const std::int64_t q = q12 + f[static_cast<std::size_t>(m3)];
                if (q > lmax) break;
                counts[static_cast<std::size_t>(q)] += w12 * (m3 == 0 ? 1 : 2);
            }
        }
    }
    return counts;
}

inline std::int64_t brute_count(const RationalExponent& c, std::int64_t lambda) {
    return brute_table(c, lambda)[static_cast<std::size_t>(lambda)];
}

// #{x in Z^3 : Q(x) <= L}, independently of any counting table.
inline std::int64_t brute_ball_count(const RationalExponent& c, std::int64_t lmax) {
    const auto t = brute_table(c, lmax);
    std::int64_t s = 0;
    for (const auto v : t) s += v;
    return s;
}

// All signed lattice points of the arithmetic sphere, materialized.
inline std::vector<std::array<std::int64_t, 3>> brute_cloud(const RationalExponent& c,
                                                            std::int64_t lambda) {
    std::vector<std::int64_t> f;
    for (std::int64_t m = 0;; ++m) {
        const std::int64_t v = floor_pow(m, c);
        if (v > lambda) break;
        f.push_back(v);
    }
    const auto mmax = static_cast<std::int64_t>(f.size()) - 1;
    std::vector<std::array<std::int64_t, 3>> pts;
    for (std::int64_t m1 = -mmax; m1 <= mmax; ++m1) {
        const std::int64_t q1 = f[static_cast<std::size_t>(std::abs(m1))];
        if (q1 > lambda) continue;
        for (std::int64_t m2 = -mmax; m2 <= mmax; ++m2) {
            const std::int64_t q12 = q1 + f[static_cast<std::size_t>(std::abs(m2))];
            if (q12 > lambda) continue;
            for (std::int64_t m3 = -mmax; m3 <= mmax; ++m3) {
                if (q12 + f[static_cast<std::size_t>(std::abs(m3))] == lambda)
                    pts.push_back({m1, m2, m3});
            }
        }
    }
    return pts;
}

// Counting term of the cap discrepancy: #(P cap {x . xi >= a}).
inline std::int64_t brute_cap_count(const RationalExponent& c, std::int64_t lambda,
                                    const std::array<double, 3>& xi, double a) {
    const auto cloud = brute_cloud(c, lambda);
    const double s = std::pow(static_cast<double>(lambda), -c.gamma_value());
    std::int64_t n = 0;
    for (const auto& p : cloud) {
        const double dot =
            s * (p[0] * xi[0] + p[1] * xi[1] + p[2] * xi[2]);
        if (dot >= a && dot <= 100.0) ++n;
    }
    return n;
}

// Naive midpoint-rule cap measure nu_c(C_{a,xi}) on the two-graph
// parametrization, no singularity handling; accuracy ~1/sqrt(ngrid).
inline double brute_cap_nu(double c, const std::array<double, 3>& xi, double a,
                           int ngrid = 2000) {
    const double h = 2.0 / ngrid;
    double cap = 0.0, mass = 0.0;
    for (int i = 0; i < ngrid; ++i) {
        const double y1 = -1.0 + (i + 0.5) * h;
        for (int j = 0; j < ngrid; ++j) {
            const double y2 = -1.0 + (j + 0.5) * h;
            const double rc = std::pow(std::abs(y1), c) + std::pow(std::abs(y2), c);
            if (rc >= 1.0) continue;
            const double w3 = std::pow(1.0 - rc, 1.0 / c);
            const double wgt = std::pow(1.0 - rc, 1.0 / c - 1.0) * h * h;
            mass += 2.0 * wgt;
            const double base = y1 * xi[0] + y2 * xi[1];
            if (base + w3 * xi[2] >= a) cap += wgt;
            if (base - w3 * xi[2] >= a) cap += wgt;
        }
    }
    return cap / mass;
}

// Classical Fourier transform of the Euclidean unit-sphere surface measure
// (total mass 4 pi): F(R) = 2 sin(2 pi R)/R.
inline double classical_sphere_ft(double r) {
    if (r == 0.0) return 4.0 * M_PI;
    return 2.0 * std::sin(2.0 * M_PI * r) / r;
}

// Archimedes: normalized cap area on the round sphere.
inline double classical_cap_nu(double a) {
    if (a >= 1.0) return 0.0;
    if (a <= -1.0) return 1.0;
    return (1.0 - a) / 2.0;
}

// Gamma at 256-bit working precision.
inline double gamma_hp(double x) {
    mpfr_t t;
    mpfr_init2(t, 256);
    mpfr_set_d(t, x, MPFR_RNDN);
    mpfr_gamma(t, t, MPFR_RNDN);
    const double r = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return r;
}

// pi from Gamma(1/2)^2 at high precision, as a self-check value.
inline double gamma_hp_pi() {
    mpfr_t t;
    mpfr_init2(t, 256);
    mpfr_set_d(t, 0.5, MPFR_RNDN);
    mpfr_gamma(t, t, MPFR_RNDN);
    mpfr_sqr(t, t, MPFR_RNDN);
    const double r = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return r;
}

// Exhaustive r-variation over all subsequences (n <= 20).
inline double brute_variation(const std::vector<double>& a, double r) {
    const int n = static_cast<int>(a.size());
    if (n > 20) throw UsageError("brute_variation: sequence too long");
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        bool have_prev = false;
        double prev = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            if (have_prev) s += std::pow(std::abs(a[static_cast<std::size_t>(i)] - prev), r);
            prev = a[static_cast<std::size_t>(i)];
            have_prev = true;
        }
        best = std::max(best, s);
    }
    return std::pow(best, 1.0 / r);
}

}  // namespace csphere::oracles
