#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "csphere/fft.hpp"
#include "csphere/regvar.hpp"
#include "csphere/util.hpp"

namespace csphere {

enum class CountMethod { enumeration, fft };

inline const char* method_name(CountMethod m) {
    return m == CountMethod::enumeration ? "enum" : "fft";
}

// Exact representation counts over a contiguous lambda range.
struct CountTable {
    std::int64_t lmax = 0;
    std::vector<std::int64_t> counts;  // index 0..lmax
    std::string method;                // enum | fft | brute
    bool signed_z3 = false;            // Z^3 table vs positive-coordinate table
    bool used_ntt = false;             // fft route fell back to the exact transform
    std::vector<std::string> function_specs;
    std::vector<std::int64_t> n0s;

    std::int64_t at(std::int64_t lambda) const {
        if (lambda < 0 || lambda > lmax) throw UsageError("CountTable: lambda out of range");
        return counts[static_cast<std::size_t>(lambda)];
    }
};

namespace detail {

// Pairwise sums n1 + n2 over two floor sets, truncated at lmax. Exact
// integer accumulation; parallel blocks merge by addition (commutative in Z).
inline std::vector<std::int64_t> pair_table_enum(const FloorSet& s1, const FloorSet& s2,
                                                 std::int64_t lmax) {
    const auto& e1 = s1.elements;
    const auto& e2 = s2.elements;
    return parallel_reduce<std::vector<std::int64_t>>(
        0, static_cast<std::int64_t>(e1.size()),
        std::vector<std::int64_t>(static_cast<std::size_t>(lmax) + 1, 0),
        [&](std::int64_t lo, std::int64_t hi) {
            std::vector<std::int64_t> part(static_cast<std::size_t>(lmax) + 1, 0);
            for (std::int64_t i = lo; i < hi; ++i) {
                const std::int64_t a = e1[static_cast<std::size_t>(i)];
                for (const std::int64_t b : e2) {
                    const std::int64_t s = a + b;
                    if (s > lmax) break;
                    ++part[static_cast<std::size_t>(s)];
                }
            }
            return part;
        },
        [](std::vector<std::int64_t> acc, const std::vector<std::int64_t>& p) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
            return acc;
        });
}

inline std::vector<std::int64_t> indicator_vector(const FloorSet& s) {
    std::vector<std::int64_t> v(s.bitmap.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.bitmap[i];
    return v;
}

inline std::vector<std::int64_t> truncate(std::vector<std::int64_t> v, std::int64_t lmax) {
    v.resize(static_cast<std::size_t>(lmax) + 1, 0);
    return v;
}

}  // namespace detail

// counts[lambda] = #{(n1,n2,n3) in N_h1 x N_h2 x N_h3 : n1+n2+n3 = lambda}.
// admit_small switches to the variant count that also uses integers below N0.
inline CountTable count_positive_range(const RegVarFunction& h1, const RegVarFunction& h2,
                                       const RegVarFunction& h3, std::int64_t lmax,
                                       CountMethod method, bool admit_small = false) {
    const FloorSet s1 = floor_set(h1, lmax, admit_small);
    const FloorSet s2 = floor_set(h2, lmax, admit_small);
    const FloorSet s3 = floor_set(h3, lmax, admit_small);
    const std::int64_t min_sum =
        s1.elements.front() + s2.elements.front() + s3.elements.front();
    if (lmax < min_sum)
        throw UsageError("count_positive_range: horizon below 3 max floor(h(N0))");

    CountTable t;
    t.lmax = lmax;
    t.method = method_name(method);
    t.function_specs = {h1.spec_string(), h2.spec_string(), h3.spec_string()};
    t.n0s = {h1.n0, h2.n0, h3.n0};

    if (method == CountMethod::enumeration) {
        const auto pair12 = detail::pair_table_enum(s1, s2, lmax);
        std::vector<std::int64_t> out(static_cast<std::size_t>(lmax) + 1, 0);
        parallel_for(0, lmax + 1, [&](std::int64_t l) {
            std::int64_t acc = 0;
            for (const std::int64_t b : s3.elements) {
                if (b > l) break;
                acc += pair12[static_cast<std::size_t>(l - b)];
            }
            out[static_cast<std::size_t>(l)] = acc;
        });
        t.counts = std::move(out);
    } else {
        bool ntt1 = false, ntt2 = false;
        const auto v1 = detail::indicator_vector(s1);
        const auto v2 = detail::indicator_vector(s2);
        const auto v3 = detail::indicator_vector(s3);
        auto pair12 = detail::truncate(convolve_exact(v1, v2, &ntt1), lmax);
        t.counts = detail::truncate(convolve_exact(pair12, v3, &ntt2), lmax);
        t.used_ntt = ntt1 || ntt2;
    }
    return t;
}

// Exact sign decomposition: every x in Z^3 with Q(x) = lambda has k nonzero
// coordinates placed in one of C(3,k) patterns with 2^k sign choices, and
// floor(|0|^c) = 0, so r(lambda) = 8 r3 + 12 r2 + 6 r1 + [lambda = 0].
inline CountTable decompose_signs(const RegVarFunction& h, std::int64_t lmax,
                                  CountMethod method) {
    const FloorSet s = floor_set(h, lmax);
    const auto v = detail::indicator_vector(s);

    std::vector<std::int64_t> r2;
    bool ntt_pair = false;
    if (method == CountMethod::enumeration)
        r2 = detail::pair_table_enum(s, s, lmax);
    else
        r2 = detail::truncate(convolve_exact(v, v, &ntt_pair), lmax);

    const CountTable pos = count_positive_range(h, h, h, lmax, method);

    CountTable t;
    t.lmax = lmax;
    t.method = pos.method;
    t.signed_z3 = true;
    t.used_ntt = pos.used_ntt || ntt_pair;
    t.function_specs = {h.spec_string()};
    t.n0s = {h.n0};
    t.counts.resize(static_cast<std::size_t>(lmax) + 1);
    for (std::int64_t l = 0; l <= lmax; ++l) {
        const auto i = static_cast<std::size_t>(l);
        t.counts[i] = 8 * pos.counts[i] + 12 * r2[i] + 6 * v[i] + (l == 0 ? 1 : 0);
    }
    return t;
}

// Main term of the Z^3 asymptotic: 8 Gamma(1+1/c)^3 / Gamma(3/c) * lambda^(3/c-1).
inline double main_term_c(double c, double lambda) {
    const double g = 1.0 / c;
    return 8.0 * std::pow(std::tgamma(1.0 + g), 3) / std::tgamma(3.0 * g) *
           std::pow(lambda, 3.0 * g - 1.0);
}

// Main term for generalized spheres with three inverse derivatives.
struct AsymptoticSpec {
    double g1, g2, g3;
    std::function<double(double)> phi1p, phi2p, phi3p;

    double beta_constant() const {
        return std::tgamma(g1) * std::tgamma(g2) * std::tgamma(g3) /
               std::tgamma(g1 + g2 + g3);
    }
    double main(double lambda) const {
        return beta_constant() * lambda * lambda * phi1p(lambda) * phi2p(lambda) *
               phi3p(lambda);
    }
};

inline AsymptoticSpec make_asymptotic_spec(const RegVarFunction& h1,
                                           const RegVarFunction& h2,
                                           const RegVarFunction& h3) {
    AsymptoticSpec s;
    s.g1 = h1.gamma_value();
    s.g2 = h2.gamma_value();
    s.g3 = h3.gamma_value();
    s.phi1p = [phi = InverseEval(h1)](double y) { return phi.deriv(y, 1); };
    s.phi2p = [phi = InverseEval(h2)](double y) { return phi.deriv(y, 1); };
    s.phi3p = [phi = InverseEval(h3)](double y) { return phi.deriv(y, 1); };
    return s;
}

// Admissibility of the exponent triple for the three-function asymptotic:
// the inequality with weight 4 on each coordinate in turn must hold.
inline bool asym_condition(double g1, double g2, double g3) {
    const auto row = [](double a, double b, double c) {
        return 4.0 * (1.0 - a) + 2.5 * (1.0 - b) + 2.5 * (1.0 - c) < 1.0;
    };
    return row(g1, g2, g3) && row(g2, g3, g1) && row(g3, g1, g2);
}

// J sums: the defining finite series, summed pairwise for determinism.
inline std::int64_t j_lower_bound(const InverseEval& phi) {
    return std::max<std::int64_t>(phi.h.n0,
                                  static_cast<std::int64_t>(std::ceil(phi.min_y())));
}

inline double j2(const InverseEval& phi1, const InverseEval& phi2, std::int64_t lambda) {
    const std::int64_t m0 = std::max(j_lower_bound(phi1), j_lower_bound(phi2));
    if (lambda < 2 * m0) throw UsageError("j2: lambda below 2 N0");
    return pairwise_sum_fn<double>(m0, lambda - m0 + 1, [&](std::int64_t m) {
        return phi1.deriv(static_cast<double>(m), 1) *
               phi2.deriv(static_cast<double>(lambda - m), 1);
    });
}

// j3 via one convolution of sampled derivative vectors (the j2 cache),
// then a weighted pairwise dot against phi1'.
inline double j3(const InverseEval& phi1, const InverseEval& phi2, const InverseEval& phi3,
                 std::int64_t lambda) {
    const std::int64_t m0 = std::max({j_lower_bound(phi1), j_lower_bound(phi2),
                                      j_lower_bound(phi3)});
    if (lambda < 3 * m0) throw UsageError("j3: lambda below 3 N0");
    const std::size_t n = static_cast<std::size_t>(lambda) + 1;
    std::vector<double> u(n, 0.0), v(n, 0.0);
    for (std::int64_t m = m0; m <= lambda; ++m) {
        u[static_cast<std::size_t>(m)] = phi2.deriv(static_cast<double>(m), 1);
        v[static_cast<std::size_t>(m)] = phi3.deriv(static_cast<double>(m), 1);
    }
    const auto j2cache = convolve_real(u, v);  // j2cache[mu] = j2_{phi2,phi3}(mu)
    return pairwise_sum_fn<double>(m0, lambda - 2 * m0 + 1, [&](std::int64_t n1) {
        return phi1.deriv(static_cast<double>(n1), 1) *
               j2cache[static_cast<std::size_t>(lambda - n1)];
    });
}

inline double j3_direct(const InverseEval& phi1, const InverseEval& phi2,
                        const InverseEval& phi3, std::int64_t lambda) {
    const std::int64_t m0 = std::max({j_lower_bound(phi1), j_lower_bound(phi2),
                                      j_lower_bound(phi3)});
    if (lambda < 3 * m0) throw UsageError("j3: lambda below 3 N0");
    double s = 0.0;
    for (std::int64_t n1 = m0; n1 <= lambda - 2 * m0; ++n1)
        s += phi1.deriv(static_cast<double>(n1), 1) * j2(phi2, phi3, lambda - n1);
    return s;
}

// Ratio/residual report for a signed table against the closed-form main term.
struct AsymWindow {
    std::int64_t lo = 0, hi = 0;
    double mean_ratio = 0.0;   // (sum r) / (sum main) over the window
    double deviation = 0.0;    // |mean_ratio - 1|
};

struct AsymReport {
    double c = 0.0;
    std::int64_t lmax = 0;
    double cumulative_count = 0.0;
    double cumulative_volume = 0.0;  // (2 Gamma(1+1/c))^3 / Gamma(1+3/c) * L^(3/c)
    double cumulative_rel_err = 0.0;
    std::vector<AsymWindow> windows;  // dyadic [2^k, min(2^{k+1}-1, lmax)]
    std::int64_t lambda_c_lower_bound = 0;  // horizon-certified lower bound for lambda(c)
};

// Largest zero + 1 (0 when the whole table is positive); a lower bound for
// the true lambda(c), certified only up to the horizon.
inline std::int64_t first_full_radius(const CountTable& t) {
    std::int64_t last_zero = -1;
    for (std::int64_t l = 0; l <= t.lmax; ++l)
        if (t.counts[static_cast<std::size_t>(l)] == 0) last_zero = l;
    return last_zero + 1;
}

inline AsymReport asymptotic_report(const CountTable& t, double c) {
    AsymReport r;
    r.c = c;
    r.lmax = t.lmax;
    double cum = 0.0;
    for (const auto v : t.counts) cum += static_cast<double>(v);
    r.cumulative_count = cum;
    const double g = 1.0 / c;
    r.cumulative_volume = std::pow(2.0 * std::tgamma(1.0 + g), 3) /
                          std::tgamma(1.0 + 3.0 * g) *
                          std::pow(static_cast<double>(t.lmax), 3.0 * g);
    r.cumulative_rel_err = std::abs(cum - r.cumulative_volume) / r.cumulative_volume;
    for (std::int64_t lo = 1; lo <= t.lmax; lo *= 2) {
        const std::int64_t hi = std::min(t.lmax, 2 * lo - 1);
        double sr = 0.0, sm = 0.0;
        for (std::int64_t l = lo; l <= hi; ++l) {
            sr += static_cast<double>(t.counts[static_cast<std::size_t>(l)]);
            sm += main_term_c(c, static_cast<double>(l));
        }
        AsymWindow w;
        w.lo = lo;
        w.hi = hi;
        w.mean_ratio = sr / sm;
        w.deviation = std::abs(w.mean_ratio - 1.0);
        r.windows.push_back(w);
    }
    r.lambda_c_lower_bound = first_full_radius(t);
    return r;
}

}  // namespace csphere
