#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "csphere/bump.hpp"
#include "csphere/counting.hpp"
#include "csphere/equidist.hpp"
#include "csphere/expsums.hpp"
#include "csphere/fft.hpp"
#include "csphere/surface.hpp"
#include "csphere/util.hpp"

namespace csphere {

// The concrete bump pair (eta, psi) of the arc split. Only plateaus and
// supports are constrained; the exp(-1/(1-u^2)) realization and its scale
// parameters are fixed here and echoed in run metadata.
struct BumpConfig {
    double c;
    PlateauFn eta_axis;  // each eta_j; eta(x) = prod eta_j(x_j)
    PlateauFn psi;       // 1 on (-1/(2c), 1/(2c)), supported in (-1/2, 1/2)

    explicit BumpConfig(double cv)
        : c(cv),
          eta_axis(std::pow(4.0, 1.0 / cv) + 0.25, 9.5),
          psi(1.0 / (2.0 * cv),
              1.0 / (2.0 * cv) + 0.95 * (0.5 - 1.0 / (2.0 * cv))) {
        if (!(cv > 1.0 && cv < 2.0)) throw UsageError("BumpConfig: c in (1,2) required");
        verify();
    }

    double eta(double x1, double x2, double x3) const {
        return eta_axis(x1) * eta_axis(x2) * eta_axis(x3);
    }
    double psi_tilde(double t) const { return 1.0 - psi(t); }

    void verify() const {
        for (int i = 0; i <= 2000; ++i) {
            const double t = -0.6 + 1.2 * i / 2000.0;
            const double v = psi(t);
            if (v < 0.0 || v > 1.0) throw ComputationError("BumpConfig: psi outside [0,1]");
            if (std::abs(t) <= 1.0 / (2.0 * c) && v != 1.0)
                throw ComputationError("BumpConfig: psi plateau violated");
            if (std::abs(t) >= 0.5 && v != 0.0)
                throw ComputationError("BumpConfig: psi support violated");
            const double u = -11.0 + 22.0 * i / 2000.0;
            const double e = eta_axis(u);
            if (e < 0.0 || e > 1.0) throw ComputationError("BumpConfig: eta outside [0,1]");
            if (std::abs(u) <= std::pow(4.0, 1.0 / c) && e != 1.0)
                throw ComputationError("BumpConfig: eta plateau violated");
            if (std::abs(u) >= 10.0 && e != 0.0)
                throw ComputationError("BumpConfig: eta support violated");
        }
    }
};

// Tabulated inverse Fourier transform of psi on [0, t_max], grid step 1/64,
// built by one zero-padded FFT over psi samples; cubic interpolation between
// grid points, zero beyond the table (the measured tail bound is recorded).
class InvPsiTable {
public:
    // The noise floor of the length-2^21 FFT is ~1e-12; values below it are
    // flushed to zero (the true transform is below 1e-16 wherever that
    // happens), so downstream scans never amplify tabulation noise.
    static constexpr double kNoiseFloor = 2e-12;

    InvPsiTable(const PlateauFn& psi, double t_max = 8192.0) : tmax_(t_max) {
        const std::size_t n_t = 1 << 15;  // psi samples on [-1/2, 1/2)
        const std::size_t big = 64 * n_t; // frequency resolution 1/64
        const auto k_max = static_cast<std::size_t>(t_max * 64.0);
        if (k_max + 2 >= big) throw UsageError("InvPsiTable: t_max too large for the grid");
        std::vector<std::complex<double>> a(big, 0.0);
        for (std::size_t j = 0; j < n_t; ++j)
            a[j] = psi(-0.5 + static_cast<double>(j) / static_cast<double>(n_t));
        fft(a, true);  // (1/big) sum a_j e(+jk/big)
        const double scale = static_cast<double>(big) / static_cast<double>(n_t);
        val_.resize(k_max + 2);
        for (std::size_t k = 0; k < val_.size(); ++k) {
            const double u = static_cast<double>(k) / 64.0;
            // e(-u/2) undoes the sample offset; the result is real (psi even)
            val_[k] = (unit_phase(-u / 2.0) * a[k]).real() * scale;
        }
        tail_max_ = 0.0;
        for (std::size_t k = val_.size() / 2; k < val_.size(); ++k)
            tail_max_ = std::max(tail_max_, std::abs(val_[k]));
        for (auto& v : val_)
            if (std::abs(v) < kNoiseFloor) v = 0.0;
    }

    // F^{-1} psi (u); even in u
    double operator()(double u) const {
        u = std::abs(u) * 64.0;
        const auto i = static_cast<std::size_t>(u);
        if (i + 2 >= val_.size()) return 0.0;
        const double t = u - static_cast<double>(i);
        const double p0 = i > 0 ? val_[i - 1] : val_[1];  // even extension at 0
        const double p1 = val_[i], p2 = val_[i + 1], p3 = val_[i + 2];
        return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                              t * (3.0 * (p1 - p2) + p3 - p0)));
    }

    double at_zero() const { return val_[0]; }
    double tail_max() const { return tail_max_; }
    double t_max() const { return tmax_; }

private:
    double tmax_;
    std::vector<double> val_;
    double tail_max_ = 0.0;
};

namespace detail {

inline const InvPsiTable& cached_invpsi(double c) {
    static std::mutex mu;
    static std::map<double, std::unique_ptr<InvPsiTable>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[c];
    if (!slot) slot = std::make_unique<InvPsiTable>(BumpConfig(c).psi);
    return *slot;
}

}  // namespace detail

// All kernels of the arc split at one radius: sigma (exact indicator),
// sigma^M (major), sigma^m (minor, via its own t-quadrature), omega, K.
// Everything depends on x only through n = Q(x) - lambda, |x|_c^c and the
// eta factor, so realized values and window-wide reductions both come from
// per-n tables plus the closed-form envelopes.
class KernelField {
public:
    KernelField(const RationalExponent& c, std::int64_t lambda)
        : c_(c),
          lambda_(lambda),
          bumps_(c.value()),
          ipsi_(&detail::cached_invpsi(c.value())),
          lam_pow_(std::pow(static_cast<double>(lambda), c.gamma_value())),
          kappa_(kappa_of(c.value())),
          lam_kappa_(std::pow(static_cast<double>(lambda), kappa_of(c.value()))),
          window_radius_(static_cast<std::int64_t>(10.0 * lam_pow_)),
          floors_(c, window_radius_ + 1) {
        if (lambda < 1) throw UsageError("KernelField: lambda >= 1");
        q_max_ = 3 * floors_[window_radius_];
        build_minor_table();
    }

    const RationalExponent& exponent() const { return c_; }
    std::int64_t lambda() const { return lambda_; }
    std::int64_t window_radius() const { return window_radius_; }
    double kappa() const { return kappa_; }
    const BumpConfig& bumps() const { return bumps_; }

    std::int64_t q_of(const std::array<std::int64_t, 3>& x) const {
        return floors_[std::llabs(x[0])] + floors_[std::llabs(x[1])] +
               floors_[std::llabs(x[2])];
    }

    double eta_at(const std::array<std::int64_t, 3>& x) const {
        return bumps_.eta(static_cast<double>(x[0]) / lam_pow_,
                          static_cast<double>(x[1]) / lam_pow_,
                          static_cast<double>(x[2]) / lam_pow_);
    }

    double sigma(const std::array<std::int64_t, 3>& x) const {
        return q_of(x) == lambda_ ? 1.0 : 0.0;
    }

    double sigma_major(const std::array<std::int64_t, 3>& x) const {
        if (std::max({std::llabs(x[0]), std::llabs(x[1]), std::llabs(x[2])}) >
            window_radius_)
            return 0.0;
        const auto n = static_cast<double>(q_of(x) - lambda_);
        return eta_at(x) * lam_kappa_ * (*ipsi_)(lam_kappa_ * n);
    }

    double sigma_minor(const std::array<std::int64_t, 3>& x) const {
        if (std::max({std::llabs(x[0]), std::llabs(x[1]), std::llabs(x[2])}) >
            window_radius_)
            return 0.0;
        return eta_at(x) * minor_value(q_of(x) - lambda_);
    }

    // I_lambda(n) = int e(nt) psi~_lambda(t) dt from the independent
    // t-quadrature (trapezoid/DFT over the full interval)
    double minor_value(std::int64_t n) const {
        const auto k = static_cast<std::size_t>(std::llabs(n));
        if (k >= i_minor_.size()) return 0.0;
        return i_minor_[k];
    }

    double omega(const std::array<double, 3>& t) const {
        const CNorm norm(c_.value());
        const double d = std::abs(norm.norm_c_pow(t) - static_cast<double>(lambda_));
        return 1.0 / (1.0 + std::pow(lam_kappa_ * d, 10.0));
    }

    double kernel_k(const std::array<double, 3>& t) const {
        return std::pow(static_cast<double>(lambda_), -9.0 / (4.0 * c_.value())) *
               omega(t);
    }

    // max over n of |lambda^kappa F^{-1}psi(lambda^kappa n) + I(n) - [n=0]|;
    // an upper bound for the field max since eta is in [0,1] and eta = 1
    // wherever sigma = 1.
    double partition_defect_max() const {
        double worst = 0.0;
        for (std::int64_t n = -lambda_; n <= q_max_ - lambda_; ++n) {
            const double major = lam_kappa_ * (*ipsi_)(lam_kappa_ * static_cast<double>(n));
            const double defect =
                std::abs(major + minor_value(n) - (n == 0 ? 1.0 : 0.0));
            worst = std::max(worst, defect);
        }
        return worst;
    }

    // sup over n of |F^{-1}psi(lambda^kappa n)| (1 + (lambda^kappa (|n|+3))^10),
    // the envelope of lambda^{1-3/c} |sigma^M| / K over the lattice window.
    // For any admissible psi (plateau forced out to 1/(2c), support inside
    // 1/2) the transform cannot decay fast enough against the 10th-power
    // envelope, so this constant is huge; see sigma_shell_constant for the
    // same ratio restricted to the sphere itself.
    double domination_constant() const {
        double worst = 0.0;
        for (std::int64_t n = -lambda_; n <= q_max_ - lambda_; ++n) {
            const double am = std::abs((*ipsi_)(lam_kappa_ * static_cast<double>(n)));
            const double denom =
                1.0 + std::pow(lam_kappa_ * static_cast<double>(std::llabs(n) + 3), 10.0);
            worst = std::max(worst, am * denom);
        }
        return worst;
    }

    // The domination ratio restricted to the support of sigma_lambda
    // (Q(x) = lambda, fractional-part defect below 3).
    double sigma_shell_constant() const {
        return std::abs((*ipsi_)(0.0)) * (1.0 + std::pow(3.0 * lam_kappa_, 10.0));
    }

    // ||K_lambda||_{L^1(R^3)} by the polar formula, integrated in the zoomed
    // variable u = lambda^kappa (r^c - lambda); pieces keep the unit-scale
    // peak of 1/(1+u^10) resolved independently of lambda.
    double mass() const {
        const double c = c_.value();
        const double lam = static_cast<double>(lambda_);
        const double u_lo = -std::min(1000.0, 0.999 * std::pow(lam, kappa_ + 1.0));
        const double u_hi = std::min(1000.0, std::pow(lam, kappa_ + 1.0));
        auto piece = [&](double a, double b) {
            double acc = 0.0;
            for (const auto& [x, w] : gauss_legendre(200)) {
                const double u = 0.5 * (a + b) + 0.5 * (b - a) * x;
                const double rc = lam + u * std::pow(lam, -kappa_);
                if (rc <= 0.0) continue;
                const double r = std::pow(rc, 1.0 / c);
                const double dr = std::pow(lam, -kappa_) / (c * std::pow(rc, 1.0 - 1.0 / c));
                acc += 0.5 * (b - a) * w * r * r * dr / (1.0 + std::pow(std::abs(u), 10.0));
            }
            return acc;
        };
        double integral = piece(std::max(u_lo, -10.0), std::min(u_hi, 10.0));
        if (u_hi > 10.0) integral += piece(10.0, u_hi);
        if (u_lo < -10.0) integral += piece(u_lo, -10.0);
        return std::pow(lam, -9.0 / (4.0 * c)) * surface_mass(c) * integral;
    }

    // Deterministic near-worst translation pair: t on the diagonal just off
    // the sphere (distance ~ lambda^{-kappa} in |.|_c^c), shifted by (1,1,1).
    // Lower-bounds the true omega translation-comparison constant, which is
    // (1 + O(lambda^kappa))^10 and large at small lambda.
    double omega_ratio_construction() const {
        const double target = static_cast<double>(lambda_) + 1.0 / lam_kappa_;
        const double coord = std::pow(target / 3.0, c_.gamma_value());
        const std::array<double, 3> t{coord, coord, coord};
        const std::array<double, 3> tg{coord + 1.0, coord + 1.0, coord + 1.0};
        const double a = omega(t), b = omega(tg);
        return std::max(a / b, b / a);
    }

    // translation comparison of omega: ratio over seeded samples of (t, gamma)
    double omega_ratio_max(int samples, std::uint64_t seed) const {
        auto rng = make_rng(seed);
        std::uniform_real_distribution<double> box(-12.0 * lam_pow_, 12.0 * lam_pow_);
        std::uniform_real_distribution<double> pert(-1.0, 1.0);
        double worst = 1.0;
        for (int i = 0; i < samples; ++i) {
            const std::array<double, 3> t{box(rng), box(rng), box(rng)};
            const std::array<double, 3> g{pert(rng), pert(rng), pert(rng)};
            const double a = omega(t);
            const double b = omega({t[0] + g[0], t[1] + g[1], t[2] + g[2]});
            worst = std::max({worst, a / b, b / a});
        }
        return worst;
    }

    // l^2 norms over the window via representation counts: bracketed by the
    // eta <= 1 overestimate (all n) and the exact eta = 1 core (n <= 3 lambda - 3).
    struct L2Bracket {
        double core = 0.0;   // exact contribution of the eta = 1 region
        double upper = 0.0;  // with eta set to 1 everywhere
    };

    L2Bracket minor_l2(const CountTable& counts) const {
        return l2_bracket(counts, [&](std::int64_t n) { return minor_value(n); });
    }

    L2Bracket major_l2(const CountTable& counts) const {
        return l2_bracket(counts, [&](std::int64_t n) {
            return lam_kappa_ * (*ipsi_)(lam_kappa_ * static_cast<double>(n));
        });
    }

    double sigma_l2(const CountTable& counts) const {
        return std::sqrt(static_cast<double>(counts.at(lambda_)));
    }

private:
    template <class ValueFn>
    L2Bracket l2_bracket(const CountTable& counts, ValueFn&& value) const {
        if (counts.lmax < q_max_)
            throw UsageError("KernelField: count table must reach 3 floor((10 lambda^{1/c})^c)");
        if (!counts.signed_z3)
            throw UsageError("KernelField: need the signed Z^3 table");
        L2Bracket b;
        for (std::int64_t n = -lambda_; n <= q_max_ - lambda_; ++n) {
            const double v = value(n);
            const double term =
                static_cast<double>(counts.at(lambda_ + n)) * v * v;
            b.upper += term;
            if (n <= 3 * lambda_ - 3) b.core += term;
        }
        b.core = std::sqrt(b.core);
        b.upper = std::sqrt(b.upper);
        return b;
    }

    void build_minor_table() {
        const auto n_hi = static_cast<std::size_t>(q_max_);  // covers |n| <= q_max
        const std::size_t big = fft_size_for(4 * (n_hi + 1));
        std::vector<std::complex<double>> a(big, 0.0);
        for (std::size_t j = 0; j < big; ++j) {
            const double t = -0.5 + static_cast<double>(j) / static_cast<double>(big);
            a[j] = bumps_.psi_tilde(t / lam_kappa_);
        }
        fft(a, true);  // (1/big) sum a_j e(+jk/big)
        i_minor_.resize(n_hi + 1);
        for (std::size_t n = 0; n <= n_hi; ++n) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // e(-n/2)
            i_minor_[n] = sign * a[n].real();
        }
    }

    RationalExponent c_;
    std::int64_t lambda_;
    BumpConfig bumps_;
    const InvPsiTable* ipsi_;
    double lam_pow_;    // lambda^{1/c}
    double kappa_;
    double lam_kappa_;  // lambda^kappa
    std::int64_t window_radius_;
    FloorPowTable floors_;
    std::int64_t q_max_ = 0;
    std::vector<double> i_minor_;  // I_lambda(n), n >= 0 (even in n)
};

// Binary field dump: header (magic, lambda, c as p/q, window bound, kernel id)
// followed by the row-major float64 grid over [-R, R]^3.
enum class KernelId : std::int32_t { sigma = 0, sigma_major = 1, sigma_minor = 2,
                                     omega = 3, kernel_k = 4 };

inline void dump_kernel_field(const KernelField& field, KernelId id, std::int64_t radius,
                              const std::string& path) {
    if (radius > 128)
        throw UsageError("dump_kernel_field: dense dump limited to |x|_inf <= 128");
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw ComputationError("dump_kernel_field: cannot open " + path);
    const char magic[8] = {'C', 'S', 'P', 'K', '0', '0', '0', '1'};
    std::fwrite(magic, 1, 8, fp);
    const std::int64_t header[4] = {field.lambda(), field.exponent().num,
                                    field.exponent().den, radius};
    std::fwrite(header, sizeof(std::int64_t), 4, fp);
    const auto kid = static_cast<std::int64_t>(id);
    std::fwrite(&kid, sizeof(std::int64_t), 1, fp);
    for (std::int64_t x = -radius; x <= radius; ++x)
        for (std::int64_t y = -radius; y <= radius; ++y)
            for (std::int64_t z = -radius; z <= radius; ++z) {
                const std::array<std::int64_t, 3> p{x, y, z};
                double v = 0.0;
                switch (id) {
                    case KernelId::sigma: v = field.sigma(p); break;
                    case KernelId::sigma_major: v = field.sigma_major(p); break;
                    case KernelId::sigma_minor: v = field.sigma_minor(p); break;
                    case KernelId::omega:
                        v = field.omega({static_cast<double>(x), static_cast<double>(y),
                                         static_cast<double>(z)});
                        break;
                    case KernelId::kernel_k:
                        v = field.kernel_k({static_cast<double>(x), static_cast<double>(y),
                                            static_cast<double>(z)});
                        break;
                }
                std::fwrite(&v, sizeof(double), 1, fp);
            }
    std::fclose(fp);
}

// --- discrete and continuous averages -----------------------------------------

using SparseFn = std::map<std::array<std::int64_t, 3>, double>;

// M_lambda f(x) = (1/r) sum_{n in S} f(x - n); exact over the finite support.
inline SparseFn discrete_average(const SparseFn& f, const RationalExponent& c,
                                 std::int64_t lambda) {
    const ProjectedCloud cloud = project(c, lambda);
    if (cloud.count == 0) throw ComputationError("discrete_average: empty sphere");
    SparseFn out;
    const double inv_r = 1.0 / static_cast<double>(cloud.count);
    for (const auto& [y, v] : f)
        for (const auto& n : cloud.lattice)
            out[{y[0] + n[0], y[1] + n[1], y[2] + n[2]}] += v * inv_r;
    return out;  // out(x) gathers f(x - n) over sphere points n
}

inline SparseFn maximal_profile(const SparseFn& f, const RationalExponent& c,
                                const std::vector<std::int64_t>& lambdas) {
    SparseFn sup;
    for (const auto l : lambdas) {
        const auto avg = discrete_average(f, c, l);
        for (const auto& [x, v] : avg) {
            auto& slot = sup[x];
            slot = std::max(slot, std::abs(v));
        }
    }
    return sup;
}

// A_t f(x) = int f(x - t theta) dmu_c(theta).
template <class F>
auto continuous_average(F&& f, const std::array<double, 3>& x, double t,
                        const SurfaceQuadrature& quad) {
    if (!(t > 0.0)) throw UsageError("continuous_average: t > 0");
    return quad.integrate([&](double a, double b, double cc) {
        return f(std::array<double, 3>{x[0] - t * a, x[1] - t * b, x[2] - t * cc});
    });
}

// --- torus ergodic experiment --------------------------------------------------

struct TorusPoint {
    std::int64_t lambda = 0;
    std::int64_t count = 0;
    std::complex<double> multiplier;  // (1/r) sum_{n in S} e(n . (m theta))
    bool empty = false;
};

// For f(x) = e(m.x) on T^3 with commuting coordinate rotations by theta,
// A_lambda f = multiplier(lambda) f; the multiplier is the sphere character
// sum at alpha = m (.) theta. Exact 1 when alpha is integral.
inline std::vector<TorusPoint> torus_ergodic_run(const std::array<double, 3>& theta,
                                                 const std::array<std::int64_t, 3>& m,
                                                 const std::vector<std::int64_t>& lambdas,
                                                 const RationalExponent& c) {
    std::vector<TorusPoint> rows;
    for (const auto l : lambdas) {
        const SphereGeometry geo(c, l);
        TorusPoint p;
        p.lambda = l;
        const double r = sphere_char_sum(geo, {0.0, 0.0, 0.0});
        p.count = static_cast<std::int64_t>(std::llround(r));
        if (p.count == 0) {
            p.empty = true;
            rows.push_back(p);
            continue;
        }
        std::array<double, 3> alpha{};
        bool integral = true;
        for (int j = 0; j < 3; ++j) {
            const double a = static_cast<double>(m[static_cast<std::size_t>(j)]) *
                             theta[static_cast<std::size_t>(j)];
            alpha[static_cast<std::size_t>(j)] = a;
            if (a != std::floor(a)) integral = false;
        }
        if (integral) {
            p.multiplier = 1.0;
        } else {
            p.multiplier = sphere_char_sum(geo, alpha) / r;
        }
        rows.push_back(p);
    }
    return rows;
}

// --- r-variation ---------------------------------------------------------------

struct VariationResult {
    double value = 0.0;
    bool exact = true;
};

// V^r over all subsequences. r = 1 telescopes to the total variation; the
// general case is an O(n^2) DP over endpoints. For r > 1 an optimal
// subsequence only uses local extrema (splitting a monotone jump strictly
// decreases |.|^r mass), so extrema compression is exact; stride thinning
// beyond 4x the cap is the documented approximate fallback.
inline VariationResult variation_seminorm(const std::vector<double>& a, double r,
                                          std::size_t exact_cap = 512) {
    if (r < 1.0) throw UsageError("variation_seminorm: r >= 1");
    VariationResult res;
    if (a.size() < 2) return res;
    if (r == 1.0) {
        double tv = 0.0;
        for (std::size_t i = 1; i < a.size(); ++i) tv += std::abs(a[i] - a[i - 1]);
        res.value = tv;
        return res;
    }
    std::vector<double> seq;
    if (a.size() <= exact_cap) {
        seq = a;
    } else {
        seq.push_back(a.front());
        for (std::size_t i = 1; i + 1 < a.size(); ++i) {
            const bool up = a[i] > a[i - 1], down = a[i] > a[i + 1];
            if (up == down) seq.push_back(a[i]);  // extrema and plateaus only
        }
        seq.push_back(a.back());
        if (seq.size() > 4 * exact_cap) {
            std::vector<double> thin;
            const std::size_t stride = seq.size() / (2 * exact_cap) + 1;
            for (std::size_t i = 0; i < seq.size(); i += stride) thin.push_back(seq[i]);
            if (thin.back() != seq.back()) thin.push_back(seq.back());
            seq.swap(thin);
            res.exact = false;
        }
    }
    const std::size_t n = seq.size();
    std::vector<double> best(n, 0.0);  // best sum of |increments|^r ending at i
    double overall = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        double b = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double cand = best[j] + std::pow(std::abs(seq[i] - seq[j]), r);
            if (cand > b) b = cand;
        }
        best[i] = b;
        overall = std::max(overall, b);
    }
    res.value = std::pow(overall, 1.0 / r);
    return res;
}

// --- minor arc profile -----------------------------------------------------------

struct MinorArcPoint {
    std::int64_t n = 0;             // dyadic block start
    std::int64_t argmax_lambda = 0;
    double value_upper = 0.0;       // max over [N, 2N] of lambda^{1-3/c} l2 (eta <= 1)
    double value_core = 0.0;        // same with the exact eta = 1 region only
    double bound = 0.0;             // N^{-(11-10c)/(6c)} log^2(N+1)
    double fitted_c = 0.0;
    std::int64_t skipped_empty = 0;
};

namespace detail {

// l2 norm of sigma^m over the window from representation counts. The minor
// value at Q - lambda = n comes from the F^{-1}psi identity
// I(n) = [n=0] - lambda^kappa F^{-1}psi(lambda^kappa n); the identity route
// is validated against the independent t-quadrature by the partition checks.
struct L2FromCounts {
    double core = 0.0;
    double upper = 0.0;
};

template <class ValueFn>
L2FromCounts l2_from_counts(const CountTable& counts, std::int64_t lambda,
                            std::int64_t q_max, ValueFn&& value) {
    L2FromCounts b;
    for (std::int64_t n = -lambda; n <= q_max - lambda; ++n) {
        const double v = value(n);
        const double term = static_cast<double>(counts.at(lambda + n)) * v * v;
        b.upper += term;
        if (n <= 3 * lambda - 3) b.core += term;
    }
    b.core = std::sqrt(b.core);
    b.upper = std::sqrt(b.upper);
    return b;
}

}  // namespace detail

// Scalar (f = delta) profile of the minor-arc maximal quantity
// max_{N <= lambda <= 2N} lambda^{1-3/c} ||sigma_lambda^m||_{l^2}.
inline std::vector<MinorArcPoint> minor_arc_profile(const RationalExponent& c,
                                                    const std::vector<std::int64_t>& n_list) {
    if (!(c.value() > 1.0 && c.value() < 1.1))
        throw UsageError("minor_arc_profile: supported range is c in (1, 11/10)");
    std::vector<MinorArcPoint> rows;
    const auto h = RegVarFunction::pure_power(c);
    const auto& ipsi = detail::cached_invpsi(c.value());
    const double cv = c.value();
    const double kap = kappa_of(cv);
    for (const auto n : n_list) {
        MinorArcPoint row;
        row.n = n;
        const std::int64_t wr_top = static_cast<std::int64_t>(
            10.0 * std::pow(2.0 * static_cast<double>(n), c.gamma_value()));
        const std::int64_t table_max = 3 * floor_pow(wr_top + 1, c);
        const auto counts = decompose_signs(h, table_max, CountMethod::fft);
        for (std::int64_t lambda = n; lambda <= 2 * n; ++lambda) {
            if (counts.at(lambda) == 0) {
                ++row.skipped_empty;
                continue;
            }
            const double lam_kappa = std::pow(static_cast<double>(lambda), kap);
            const std::int64_t wr = static_cast<std::int64_t>(
                10.0 * std::pow(static_cast<double>(lambda), c.gamma_value()));
            const std::int64_t q_max = 3 * floor_pow(wr, c);
            const auto l2 = detail::l2_from_counts(
                counts, lambda, q_max, [&](std::int64_t nn) {
                    const double major =
                        lam_kappa * ipsi(lam_kappa * static_cast<double>(nn));
                    return (nn == 0 ? 1.0 : 0.0) - major;
                });
            const double w = std::pow(static_cast<double>(lambda), 1.0 - 3.0 / cv);
            if (w * l2.upper > row.value_upper) {
                row.value_upper = w * l2.upper;
                row.value_core = w * l2.core;
                row.argmax_lambda = lambda;
            }
        }
        row.bound = std::pow(static_cast<double>(n), -(11.0 - 10.0 * cv) / (6.0 * cv)) *
                    std::pow(std::log(static_cast<double>(n) + 1.0), 2.0);
        row.fitted_c = row.value_upper / row.bound;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace csphere
