#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "csphere/bump.hpp"
#include "csphere/util.hpp"

namespace csphere {

// c-norm geometry; plain doubles, exact rationals are not needed here.
struct CNorm {
    double c;
    explicit CNorm(double cv) : c(cv) {
        if (!(c > 0.0)) throw UsageError("CNorm: c must be positive");
    }
    double pow_abs(double x) const { return std::pow(std::abs(x), c); }
    double norm_c_pow(const std::array<double, 3>& x) const {
        return pow_abs(x[0]) + pow_abs(x[1]) + pow_abs(x[2]);
    }
    double norm_c(const std::array<double, 3>& x) const {
        return std::pow(norm_c_pow(x), 1.0 / c);
    }
};

struct GlNode {
    double x, w;
};

// Gauss-Legendre nodes/weights on [-1,1]; Newton on the recurrence, cached.
inline const std::vector<GlNode>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<std::vector<GlNode>>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto rule = std::make_unique<std::vector<GlNode>>(static_cast<std::size_t>(n));
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * pp * pp);
            (*rule)[static_cast<std::size_t>(i)] = {-x, w};
            (*rule)[static_cast<std::size_t>(n - 1 - i)] = {x, w};
        }
        slot = std::move(rule);
    }
    return *slot;
}

// Quadrature for int_0^1 (1-t^c)^beta g(t) dt. The boundary singularity
// (beta in (-1/2, 0] here) is absorbed by the substitution
// t = (1-u^c)^{1/c} on the band [2^{-1/c}, 1], which maps it back onto
// [0, 2^{-1/c}] with the smooth weight u^{c beta + c - 1} (1-u^c)^{1/c-1}.
inline std::vector<GlNode> edge_rule(double c, double beta, int n) {
    if (c * beta + c - 1.0 < 0.0)
        throw ComputationError("edge_rule: beta too singular for the band substitution");
    const double s0 = std::pow(0.5, 1.0 / c);
    const auto& gl = gauss_legendre(n);
    std::vector<GlNode> rule;
    rule.reserve(2 * static_cast<std::size_t>(n));
    for (const auto& [x, w] : gl) {
        const double t = 0.5 * s0 * (x + 1.0);
        const double wt = 0.5 * s0 * w;
        rule.push_back({t, wt * std::pow(1.0 - std::pow(t, c), beta)});
    }
    for (const auto& [x, w] : gl) {
        const double u = 0.5 * s0 * (x + 1.0);
        const double wt = 0.5 * s0 * w;
        const double uc = std::pow(u, c);
        rule.push_back({std::pow(1.0 - uc, 1.0 / c),
                        wt * std::pow(u, c * beta + c - 1.0) *
                            std::pow(1.0 - uc, 1.0 / c - 1.0)});
    }
    return rule;
}

// Tensor rule for the surface measure mu_c on S_c^2 via the two-graph
// parametrization over the disc {|y|_c <= 1}: for the positive quadrant,
//   int = int_0^1 (1-y1^c)^{2/c-1} int_0^1 (1-s^c)^{1/c-1} F(y1, rho s) ds dy1,
// rho = (1-y1^c)^{1/c}, third coordinate +-rho (1-s^c)^{1/c}. Signs and the
// graph pair are expanded at integration time, so f need not be symmetric.
struct SurfaceQuadrature {
    double c = 0.0;
    int nq = 0;                      // Gauss nodes per rule piece
    std::vector<GlNode> outer;       // (t_i, W_i), weight includes (1-t^c)^{2/c-1}
    std::vector<GlNode> inner;       // (s_j, V_j), weight includes (1-s^c)^{1/c-1}
    std::vector<double> rho;         // (1-t_i^c)^{1/c}
    std::vector<double> q;           // (1-s_j^c)^{1/c}

    // integral of f over S_c^2 against mu_c; deterministic block reduction
    template <class F>
    auto integrate(F&& f) const -> decltype(f(1.0, 1.0, 1.0)) {
        using R = decltype(f(1.0, 1.0, 1.0));
        return parallel_reduce<R>(
            0, static_cast<std::int64_t>(outer.size()), R{},
            [&](std::int64_t lo, std::int64_t hi) {
                R acc{};
                for (std::int64_t i = lo; i < hi; ++i) {
                    const auto iu = static_cast<std::size_t>(i);
                    const double y1 = outer[iu].x, wi = outer[iu].w, ri = rho[iu];
                    R row{};
                    for (std::size_t j = 0; j < inner.size(); ++j) {
                        const double y2 = ri * inner[j].x;
                        const double w3 = ri * q[j];
                        const double w = wi * inner[j].w;
                        R pt{};
                        for (const double s1 : {1.0, -1.0})
                            for (const double s2 : {1.0, -1.0})
                                pt += f(s1 * y1, s2 * y2, w3) + f(s1 * y1, s2 * y2, -w3);
                        row += w * pt;
                    }
                    acc += row;
                }
                return acc;
            },
            [](R a, const R& b) { return a + b; });
    }

    double mass() const {
        return integrate([](double, double, double) { return 1.0; });
    }
};

inline SurfaceQuadrature make_surface_quadrature(double c, int nq) {
    if (nq < 4) throw UsageError("surface quadrature: nq too small");
    SurfaceQuadrature s;
    s.c = c;
    s.nq = nq;
    s.outer = edge_rule(c, 2.0 / c - 1.0, nq);
    s.inner = edge_rule(c, 1.0 / c - 1.0, nq);
    s.rho.reserve(s.outer.size());
    for (const auto& n : s.outer)
        s.rho.push_back(std::pow(1.0 - std::pow(n.x, c), 1.0 / c));
    s.q.reserve(s.inner.size());
    for (const auto& n : s.inner)
        s.q.push_back(std::pow(1.0 - std::pow(n.x, c), 1.0 / c));
    return s;
}

// Closed form mu_c(S_c^2) = 8 Gamma(1/c)^3 / (c^2 Gamma(3/c)).
inline double surface_mass(double c) {
    if (!(c > 0.0)) throw UsageError("surface_mass: c must be positive");
    const double g = 1.0 / c;
    return 8.0 * std::pow(std::tgamma(g), 3) / (c * c * std::tgamma(3.0 * g));
}

// Volume of the unit c-ball = mu_c / 3 = (2 Gamma(1+1/c))^3 / Gamma(1+3/c).
inline double ball_volume(double c) {
    const double g = 1.0 / c;
    return std::pow(2.0 * std::tgamma(1.0 + g), 3) / std::tgamma(1.0 + 3.0 * g);
}

// Integration with a Richardson doubling error estimate (three levels).
struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool converging = true;  // doubling contracted the difference by >= 4x
};

template <class F>
QuadResult surface_integral_checked(F&& f, double c, int nq) {
    const double v0 = make_surface_quadrature(c, nq / 4).integrate(f);
    const double v1 = make_surface_quadrature(c, nq / 2).integrate(f);
    const double v2 = make_surface_quadrature(c, nq).integrate(f);
    QuadResult r;
    r.value = v2;
    r.err_estimate = std::abs(v2 - v1);
    r.converging = std::abs(v2 - v1) <= std::abs(v1 - v0) / 4.0 + 1e-14 * std::abs(v2);
    return r;
}

// --- Fourier transform of mu_c ---------------------------------------------

// Node requirement: >= 10 nodes per oscillation along each parameter axis.
inline int fourier_nq_for(double xi_norm) {
    return std::max(48, static_cast<int>(std::ceil(10.0 * xi_norm - 1e-9)) + 16);
}

namespace detail {

inline const SurfaceQuadrature& cached_quadrature(double c, int nq) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::unique_ptr<SurfaceQuadrature>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{c, nq}];
    if (!slot) slot = std::make_unique<SurfaceQuadrature>(make_surface_quadrature(c, nq));
    return *slot;
}

}  // namespace detail

// F mu_c(xi) = int e(-w.xi) dmu_c(w). The sign expansion collapses to a
// product of cosines, so the value is real; returned as complex to match
// the generic integrate() route (tests compare the two).
inline std::complex<double> fourier_mu(const SurfaceQuadrature& quad,
                                       const std::array<double, 3>& xi) {
    const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    if (quad.nq < fourier_nq_for(norm))
        throw ComputationError("fourier_mu: quadrature resolution insufficient for |xi|=" +
                               fmt_g17(norm));
    const double tx = 2.0 * M_PI * xi[0], ty = 2.0 * M_PI * xi[1], tz = 2.0 * M_PI * xi[2];
    const double re = parallel_reduce<double>(
        0, static_cast<std::int64_t>(quad.outer.size()), 0.0,
        [&](std::int64_t lo, std::int64_t hi) {
            double acc = 0.0;
            for (std::int64_t i = lo; i < hi; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                const double y1 = quad.outer[iu].x, wi = quad.outer[iu].w,
                             ri = quad.rho[iu];
                const double c1 = std::cos(tx * y1);
                double row = 0.0;
                for (std::size_t j = 0; j < quad.inner.size(); ++j) {
                    const double y2 = ri * quad.inner[j].x;
                    const double w3 = ri * quad.q[j];
                    row += quad.inner[j].w * std::cos(ty * y2) * std::cos(tz * w3);
                }
                acc += wi * c1 * row;
            }
            return acc;
        },
        [](double a, double b) { return a + b; });
    return {8.0 * re, 0.0};
}

inline std::complex<double> fourier_mu(double c, const std::array<double, 3>& xi) {
    const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return fourier_mu(detail::cached_quadrature(c, fourier_nq_for(norm)), xi);
}

// Central finite differences of F mu_c; step scales like (1+|xi|)^{-1}.
inline std::array<double, 3> fourier_mu_grad(double c, const std::array<double, 3>& xi) {
    const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const double step = 1e-3 / (1.0 + norm);
    std::array<double, 3> g{};
    for (int k = 0; k < 3; ++k) {
        auto hi = xi, lo = xi;
        hi[static_cast<std::size_t>(k)] += step;
        lo[static_cast<std::size_t>(k)] -= step;
        g[static_cast<std::size_t>(k)] =
            (fourier_mu(c, hi).real() - fourier_mu(c, lo).real()) / (2.0 * step);
    }
    return g;
}

struct DecayRow {
    double radius = 0.0;
    double max_scaled_abs = 0.0;  // max over directions of |xi| |F mu_c(xi)|
    std::array<double, 3> argmax_direction{};
};

// Seeded per-shell maxima of |xi| |F mu_c(xi)|; the testable surrogate of
// the (1+|xi|)^{-1} decay, whose implied constant is not pinned anywhere.
inline std::vector<DecayRow> decay_profile(double c, const std::vector<double>& radii,
                                           int samples, std::uint64_t seed) {
    std::vector<DecayRow> rows;
    for (const double r : radii) {
        auto rng = make_rng(seed ^ static_cast<std::uint64_t>(r * 1000.0));
        std::vector<std::array<double, 3>> dirs(static_cast<std::size_t>(samples));
        for (auto& d : dirs) d = random_unit_vector(rng);
        const auto& quad = detail::cached_quadrature(c, fourier_nq_for(r));
        DecayRow row;
        row.radius = r;
        for (const auto& d : dirs) {
            const std::array<double, 3> xi{r * d[0], r * d[1], r * d[2]};
            const double v = r * std::abs(fourier_mu(quad, xi).real());
            if (v > row.max_scaled_abs) {
                row.max_scaled_abs = v;
                row.argmax_direction = d;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

// --- caps --------------------------------------------------------------------

struct CapSpec {
    std::array<double, 3> xi{0.0, 0.0, 1.0};
    double a = 0.0;

    CapSpec() = default;
    CapSpec(const std::array<double, 3>& dir, double threshold) : xi(dir), a(threshold) {
        const double n = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        if (std::abs(n - 1.0) > 1e-12) throw UsageError("CapSpec: direction must be unit");
    }
};

// All quadrature atoms of mu_c projected onto a direction: sorted dot values
// with suffix sums. cap(a) is then a monotone interpolation, equivalent to
// mollifying the indicator at node spacing.
class CapProfile {
public:
    CapProfile(const SurfaceQuadrature& quad, const std::array<double, 3>& xi) {
        atoms_.reserve(quad.outer.size() * quad.inner.size() * 8);
        for (std::size_t i = 0; i < quad.outer.size(); ++i) {
            const double y1 = quad.outer[i].x, wi = quad.outer[i].w, ri = quad.rho[i];
            for (std::size_t j = 0; j < quad.inner.size(); ++j) {
                const double y2 = ri * quad.inner[j].x;
                const double w3 = ri * quad.q[j];
                const double w = wi * quad.inner[j].w;
                for (const double s1 : {1.0, -1.0})
                    for (const double s2 : {1.0, -1.0})
                        for (const double s3 : {1.0, -1.0})
                            atoms_.push_back(
                                {s1 * y1 * xi[0] + s2 * y2 * xi[1] + s3 * w3 * xi[2], w});
            }
        }
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.u < b.u; });
        suffix_.resize(atoms_.size() + 1, 0.0);
        for (std::size_t k = atoms_.size(); k-- > 0;)
            suffix_[k] = suffix_[k + 1] + atoms_[k].w;
    }

    double mass() const { return suffix_[0]; }

    // measure of {x . xi >= a}, atoms at or above a (sharp step version)
    double cap_sharp(double a) const {
        const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a,
                                         [](const Atom& at, double v) { return at.u < v; });
        return suffix_[static_cast<std::size_t>(it - atoms_.begin())];
    }

    // piecewise-linear interpolation between atom positions
    double cap(double a) const {
        if (atoms_.empty()) return 0.0;
        if (a <= atoms_.front().u) return mass();
        if (a > atoms_.back().u) return 0.0;
        const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a,
                                         [](const Atom& at, double v) { return at.u < v; });
        const auto k = static_cast<std::size_t>(it - atoms_.begin());
        const double u1 = atoms_[k].u;
        const double u0 = atoms_[k - 1].u;
        const double f = u1 > u0 ? (u1 - a) / (u1 - u0) : 0.0;
        return suffix_[k] + f * (suffix_[k - 1] - suffix_[k]);
    }

    // integral of a scalar profile g(x . xi) against mu_c
    template <class G>
    double integrate_profile(G&& g) const {
        return parallel_reduce<double>(
            0, static_cast<std::int64_t>(atoms_.size()), 0.0,
            [&](std::int64_t lo, std::int64_t hi) {
                double acc = 0.0;
                for (std::int64_t k = lo; k < hi; ++k)
                    acc += atoms_[static_cast<std::size_t>(k)].w *
                           g(atoms_[static_cast<std::size_t>(k)].u);
                return acc;
            },
            [](double a, double b) { return a + b; });
    }

private:
    struct Atom {
        double u, w;
    };
    std::vector<Atom> atoms_;
    std::vector<double> suffix_;
};

// nu_c(C_{a,xi}) with the probability normalization nu_c = mu_c / mu_c(S_c^2).
inline double cap_measure(const CapSpec& cap, const SurfaceQuadrature& quad) {
    const CapProfile prof(quad, cap.xi);
    return prof.cap(cap.a) / prof.mass();
}

// Smoothing sandwich: integrals of phi^{+-}_{a,delta} bracket the sharp cap.
struct CapSandwich {
    double lower = 0.0;   // int phi^+ d nu
    double sharp = 0.0;   // nu(C_{a,xi})
    double upper = 0.0;   // int phi^- d nu
};

inline CapSandwich cap_sandwich(const CapSpec& cap, double delta,
                                const SurfaceQuadrature& quad) {
    const CapProfile prof(quad, cap.xi);
    const double m = prof.mass();
    CapSandwich s;
    s.lower = prof.integrate_profile(
                  [&](double u) { return smoothed_step_plus(u, cap.a, delta); }) / m;
    s.upper = prof.integrate_profile(
                  [&](double u) { return smoothed_step_minus(u, cap.a, delta); }) / m;
    s.sharp = prof.cap(cap.a) / m;
    return s;
}

// --- polar decomposition check ----------------------------------------------

struct PolarCheck {
    double lhs = 0.0;  // 3-D tensor quadrature of f
    double rhs = 0.0;  // int_0^inf r^2 int f(r y) dmu_c(y) dr
    double relerr = 0.0;
};

template <class F>
PolarCheck polar_check(F&& f, double c, double r_max, int nq3d, int nq_surface,
                       int nq_radial) {
    PolarCheck p;
    const auto& gl = gauss_legendre(nq3d);
    p.lhs = parallel_reduce<double>(
        0, nq3d, 0.0,
        [&](std::int64_t lo, std::int64_t hi) {
            double acc = 0.0;
            for (std::int64_t i = lo; i < hi; ++i) {
                const double x = r_max * gl[static_cast<std::size_t>(i)].x;
                const double wx = r_max * gl[static_cast<std::size_t>(i)].w;
                for (int j = 0; j < nq3d; ++j) {
                    const double y = r_max * gl[static_cast<std::size_t>(j)].x;
                    const double wy = r_max * gl[static_cast<std::size_t>(j)].w;
                    for (int k = 0; k < nq3d; ++k) {
                        const double z = r_max * gl[static_cast<std::size_t>(k)].x;
                        const double wz = r_max * gl[static_cast<std::size_t>(k)].w;
                        acc += wx * wy * wz * f(std::array<double, 3>{x, y, z});
                    }
                }
            }
            return acc;
        },
        [](double a, double b) { return a + b; });

    const auto quad = make_surface_quadrature(c, nq_surface);
    const auto& glr = gauss_legendre(nq_radial);
    double rhs = 0.0;
    for (const auto& [x, w] : glr) {
        const double r = 0.5 * r_max * (x + 1.0);
        const double wr = 0.5 * r_max * w;
        const double shell = quad.integrate([&](double a, double b, double cc) {
            return f(std::array<double, 3>{r * a, r * b, r * cc});
        });
        rhs += wr * r * r * shell;
    }
    p.rhs = rhs;
    p.relerr = std::abs(p.lhs - p.rhs) / std::max(std::abs(p.lhs), 1e-300);
    return p;
}

}  // namespace csphere
