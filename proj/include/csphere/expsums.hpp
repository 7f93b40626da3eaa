#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "csphere/bump.hpp"
#include "csphere/fft.hpp"
#include "csphere/floor_pow.hpp"
#include "csphere/regvar.hpp"
#include "csphere/util.hpp"

namespace csphere {

// Arc-split scale: kappa = (3-4c)/(4c), in (-5/8, -1/4) for c in (1,2).
inline double kappa_of(double c) { return 3.0 / (4.0 * c) - 1.0; }

// Minor-arc edge N_c = (2c)^{-1} (2N)^kappa.
inline double minor_arc_edge(double c, double n) {
    return std::pow(2.0 * n, kappa_of(c)) / (2.0 * c);
}

// Largest chi with 4(1-gamma) + 5 chi < 1 (open bound).
inline double chi_max(double gamma) { return (1.0 - 4.0 * (1.0 - gamma)) / 5.0; }

inline bool chi_admissible(double gamma, double chi) {
    return chi > 0.0 && 4.0 * (1.0 - gamma) + 5.0 * chi < 1.0;
}

// Uniform grid on the torus identified with [-1/2, 1/2).
struct TGrid {
    std::int64_t resolution = 0;  // number of nodes
    bool minor_only = false;      // restrict to |t| in [N_c, 1/2]
    double minor_edge = 0.0;

    double node(std::int64_t j) const {
        return -0.5 + static_cast<double>(j) / static_cast<double>(resolution);
    }
};

// F_lambda(t) = sum_{N0 <= n <= lambda} phi'(n) e(nt); pairwise accumulation.
inline std::complex<double> f_sum(const InverseEval& phi, std::int64_t lambda, double t) {
    const std::int64_t m0 = std::max<std::int64_t>(
        phi.h.n0, static_cast<std::int64_t>(std::ceil(phi.min_y())));
    if (lambda < m0) throw UsageError("f_sum: lambda below N0");
    return pairwise_sum_fn<std::complex<double>>(m0, lambda + 1, [&](std::int64_t n) {
        return phi.deriv(static_cast<double>(n), 1) * unit_phase(static_cast<double>(n) * t);
    });
}

// G_lambda(t) = sum_{n in N_h cap [lambda]} e(nt).
inline std::complex<double> g_sum(const FloorSet& s, double t) {
    return pairwise_sum_fn<std::complex<double>>(
        0, static_cast<std::int64_t>(s.elements.size()), [&](std::int64_t i) {
            return unit_phase(static_cast<double>(s.elements[static_cast<std::size_t>(i)]) * t);
        });
}

inline std::complex<double> g_sum(const RegVarFunction& h, std::int64_t lambda, double t) {
    return g_sum(floor_set(h, lambda), t);
}

namespace detail {

// Values of sum_n coeff[n] e(n t_j) on the uniform grid t_j = j/M via FFT.
// Index j maps to the torus node j/M - [j >= M/2], matching TGrid order
// after rotation by M/2.
inline std::vector<std::complex<double>> grid_values(std::vector<std::complex<double>> coeff,
                                                     std::size_t gridsize) {
    coeff.resize(gridsize, 0.0);
    fft(coeff, true);  // e(+n j / M), no 1/M scaling wanted:
    for (auto& v : coeff) v *= static_cast<double>(gridsize);
    return coeff;
}

}  // namespace detail

// G_lambda on the uniform grid of the given size (FFT index order: node j
// is t = j/M for j < M/2, j/M - 1 beyond).
inline std::vector<std::complex<double>> g_values_on_grid(const FloorSet& s,
                                                          std::size_t gridsize) {
    std::vector<std::complex<double>> coeff(static_cast<std::size_t>(s.horizon) + 1, 0.0);
    for (const auto e : s.elements) coeff[static_cast<std::size_t>(e)] = 1.0;
    return detail::grid_values(std::move(coeff), fft_size_for(gridsize));
}

struct FgGap {
    std::int64_t lambda = 0;
    std::int64_t grid_size = 0;
    double sup = 0.0;         // grid sup of |F - G| (lower bound for the true sup)
    double argmax_t = 0.0;
    double bound = 0.0;       // phi(lambda) lambda^{-chi}
    double fitted_c = 0.0;    // sup / bound
    double lipschitz_slack = 0.0;  // 2 pi lambda * mass / grid_size, inter-node variation
};

// Grid sup of |F_lambda - G_lambda| with resolution >= res_factor * lambda.
inline FgGap fg_gap(const RegVarFunction& h, std::int64_t lambda, double chi,
                    std::int64_t res_factor = 8) {
    if (!chi_admissible(h.gamma_value(), chi))
        throw UsageError("fg_gap: chi outside the admissible range 4(1-gamma)+5chi<1");
    const InverseEval phi(h);
    const FloorSet s = floor_set(h, lambda);
    const std::size_t m =
        fft_size_for(static_cast<std::size_t>(res_factor) * static_cast<std::size_t>(lambda));
    std::vector<std::complex<double>> coeff(static_cast<std::size_t>(lambda) + 1, 0.0);
    const std::int64_t m0 = std::max<std::int64_t>(
        h.n0, static_cast<std::int64_t>(std::ceil(phi.min_y())));
    double mass = 0.0;  // sum of |coefficients|, controls d/dt
    for (std::int64_t n = m0; n <= lambda; ++n) {
        coeff[static_cast<std::size_t>(n)] += phi.deriv(static_cast<double>(n), 1);
        mass += std::abs(phi.deriv(static_cast<double>(n), 1));
    }
    for (const auto e : s.elements) {
        coeff[static_cast<std::size_t>(e)] -= 1.0;
        mass += 1.0;
    }
    const auto vals = detail::grid_values(std::move(coeff), m);
    FgGap r;
    r.lambda = lambda;
    r.grid_size = static_cast<std::int64_t>(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double a = std::abs(vals[j]);
        if (a > r.sup) {
            r.sup = a;
            const double t = static_cast<double>(j) / static_cast<double>(m);
            r.argmax_t = t < 0.5 ? t : t - 1.0;
        }
    }
    r.bound = phi(static_cast<double>(lambda)) * std::pow(static_cast<double>(lambda), -chi);
    r.fitted_c = r.sup / r.bound;
    r.lipschitz_slack = 2.0 * M_PI * static_cast<double>(lambda) * mass /
                        static_cast<double>(m);
    return r;
}

struct VdcResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// Van der Corput second-derivative test: |sum_{k in I} e(F(k))| against
// C0 (r |I| eta^(1/2) + eta^(-1/2)), where eta <= |F''| <= r eta on I.
inline VdcResult vdc_check(const std::function<double(double)>& phase,
                           const std::function<double(double)>& second_deriv,
                           double a, double b, double eta, double r, double c0 = 10.0) {
    if (b - a < 1.0) throw UsageError("vdc_check: |I| must be at least 1");
    if (!(eta > 0.0) || r < 1.0)
        throw UsageError("vdc_check: eta = 0 (or r < 1) violates the derivative sandwich");
    const int mesh = 64;
    for (int i = 0; i <= mesh; ++i) {
        const double x = a + (b - a) * i / mesh;
        const double d2 = std::abs(second_deriv(x));
        if (d2 < eta * (1.0 - 1e-9) || d2 > r * eta * (1.0 + 1e-9))
            throw ComputationError("vdc_check: |F''| leaves [eta, r eta] at x=" + fmt_g17(x));
    }
    const std::int64_t k0 = static_cast<std::int64_t>(std::ceil(a));
    const std::int64_t k1 = static_cast<std::int64_t>(std::floor(b));
    const auto sum = pairwise_sum_fn<std::complex<double>>(k0, k1 + 1, [&](std::int64_t k) {
        return unit_phase(phase(static_cast<double>(k)));
    });
    VdcResult res;
    res.lhs = std::abs(sum);
    res.rhs = c0 * (r * (b - a) * std::sqrt(eta) + 1.0 / std::sqrt(eta));
    res.pass = res.lhs <= res.rhs;
    return res;
}

inline VdcResult vdc_check(const std::function<double(double)>& phase, double a, double b,
                           double eta, double r, double c0 = 10.0) {
    const double step = 0.25;
    auto numeric_d2 = [phase, step](double x) {
        return (phase(x + step) - 2.0 * phase(x) + phase(x - step)) / (step * step);
    };
    return vdc_check(phase, numeric_d2, a, b, eta, r, c0);
}

struct BoundedSum {
    double value = 0.0;
    double bound = 0.0;  // comparison bound with constant 1
};

// U_{P,P'}(t, xi) = |sum_{P <= n <= P'} e(n^c t + n xi)| and the second
// derivative test bound P^{c/2} |t|^{1/2} + P^{1-c/2} |t|^{-1/2}.
inline BoundedSum u_sum(std::int64_t p, std::int64_t pp, double t, double xi, double c) {
    if (!(1 <= p && p <= pp && pp <= 2 * p)) throw UsageError("u_sum: need 1 <= P <= P' <= 2P");
    BoundedSum r;
    const auto s = pairwise_sum_fn<std::complex<double>>(p, pp + 1, [&](std::int64_t n) {
        const double phase = std::pow(static_cast<double>(n), c) * t +
                             static_cast<double>(n) * xi;
        return unit_phase(phase);
    });
    r.value = std::abs(s);
    if (t != 0.0)
        r.bound = std::pow(static_cast<double>(p), c / 2.0) * std::sqrt(std::abs(t)) +
                  std::pow(static_cast<double>(p), 1.0 - c / 2.0) / std::sqrt(std::abs(t));
    return r;
}

// V_{P,P'}(M) = sum min{1, 1/(M ||n^c||)} and (1+log M)(P/M + P^{c/2} M^{1/2}).
inline BoundedSum v_sum(std::int64_t p, std::int64_t pp, std::int64_t m, double c) {
    if (!(1 <= p && p <= pp && pp <= 2 * p)) throw UsageError("v_sum: need 1 <= P <= P' <= 2P");
    if (m < 1) throw UsageError("v_sum: M >= 1");
    BoundedSum r;
    double s = 0.0;
    for (std::int64_t n = p; n <= pp; ++n) {
        const long double v = std::pow(static_cast<long double>(n), static_cast<long double>(c));
        const long double fr = v - std::floor(v);
        const double dist = static_cast<double>(std::min(fr, 1.0L - fr));
        s += std::min(1.0, 1.0 / (static_cast<double>(m) * dist));
    }
    r.value = s;
    const double pd = static_cast<double>(p), md = static_cast<double>(m);
    r.bound = (1.0 + std::log(md)) * (pd / md + std::pow(pd, c / 2.0) * std::sqrt(md));
    return r;
}

// Pi^g_{t,s}(xi) = sum_n e(floor(|n|^c) t + n xi) g(n / s^{1/c}).
inline std::complex<double> pi_sum(const PlateauFn& g, const FloorPowTable& floors,
                                   double t, double s, double xi) {
    if (s < 1.0) throw UsageError("pi_sum: s >= 1 required");
    const double radius = g.support * std::pow(s, floors.c.gamma_value());
    const auto nmax = static_cast<std::int64_t>(std::floor(radius));
    if (nmax > floors.max_m()) throw UsageError("pi_sum: floor table too short");
    return pairwise_sum_fn<std::complex<double>>(-nmax, nmax + 1, [&](std::int64_t n) {
        const std::int64_t fl = floors[std::llabs(n)];
        const double w = g(static_cast<double>(n) / std::pow(s, floors.c.gamma_value()));
        if (w == 0.0) return std::complex<double>(0.0, 0.0);
        const double phase = frac_mul(static_cast<std::uint64_t>(fl), t) +
                             static_cast<double>(n) * xi;
        return w * unit_phase(phase);
    });
}

// Deterministic minor-arc scan of |Pi| against N^{1/3+1/(3c)} log(N+1).
struct PiScanResult {
    double max_abs = 0.0;
    double bound = 0.0;  // constant-1 comparison bound
    double fitted_c = 0.0;
    double at_t = 0.0, at_s = 0.0, at_xi = 0.0;
};

inline PiScanResult pi_minor_scan(const PlateauFn& g, const RationalExponent& c,
                                  std::int64_t n, int ns = 6, int nxi = 8, int nt = 8) {
    const double cv = c.value();
    const double edge = minor_arc_edge(cv, static_cast<double>(n));
    const FloorPowTable floors(
        c, static_cast<std::int64_t>(g.support * std::pow(2.0 * n, c.gamma_value())) + 2);
    PiScanResult r;
    for (int is = 0; is < ns; ++is) {
        const double s = std::pow(2.0 * n, (is + 1.0) / ns);
        for (int ix = 0; ix < nxi; ++ix) {
            const double xi = -0.5 + (ix + 0.5) / nxi;
            for (int it = 0; it < nt; ++it) {
                const double t = edge + (0.5 - edge) * (it + 0.5) / nt;
                for (const double tt : {t, -t}) {
                    const double a = std::abs(pi_sum(g, floors, tt, s, xi));
                    if (a > r.max_abs) {
                        r.max_abs = a;
                        r.at_t = tt;
                        r.at_s = s;
                        r.at_xi = xi;
                    }
                }
            }
        }
    }
    r.bound = std::pow(static_cast<double>(n), 1.0 / 3.0 + 1.0 / (3.0 * cv)) *
              std::log(static_cast<double>(n) + 1.0);
    r.fitted_c = r.max_abs / r.bound;
    return r;
}

}  // namespace csphere
