#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

#include "csphere/counting.hpp"
#include "csphere/fft.hpp"
#include "csphere/floor_pow.hpp"
#include "csphere/surface.hpp"
#include "csphere/util.hpp"

namespace csphere {

// Shared enumeration tables for one arithmetic sphere: floor powers up to
// the coordinate bound and the inverse map value -> m (unique, floors are
// strictly increasing in m).
struct SphereGeometry {
    RationalExponent c;
    std::int64_t lambda;
    FloorPowTable floors;
    std::vector<std::int32_t> val_to_m;  // -1 when the value is not a floor power
    std::int64_t mmax;
    double proj;  // lambda^{-1/c}

    SphereGeometry(const RationalExponent& cc, std::int64_t l)
        : c(cc),
          lambda(l),
          floors(cc, static_cast<std::int64_t>(
                         std::ceil(std::pow(static_cast<double>(l) + 1.0,
                                            cc.gamma_value()))) + 2) {
        if (l < 1) throw UsageError("SphereGeometry: lambda >= 1 required");
        mmax = floors.inverse_floor(l);
        val_to_m.assign(static_cast<std::size_t>(l) + 1, -1);
        for (std::int64_t m = 0; m <= mmax; ++m)
            val_to_m[static_cast<std::size_t>(floors[m])] = static_cast<std::int32_t>(m);
        proj = std::pow(static_cast<double>(l), -c.gamma_value());
    }

    // Ordered nonnegative coordinate triples with floor(m1^c)+...+floor(m3^c)
    // = lambda; fn(m1, m2, m3) is invoked once per triple. Serial.
    template <class Fn>
    void for_each_triple(Fn&& fn) const {
        for (std::int64_t m1 = 0; m1 <= mmax; ++m1) {
            const std::int64_t q1 = floors[m1];
            if (q1 > lambda) break;
            for (std::int64_t m2 = 0; m2 <= mmax; ++m2) {
                const std::int64_t q12 = q1 + floors[m2];
                if (q12 > lambda) break;
                const std::int32_t m3 = val_to_m[static_cast<std::size_t>(lambda - q12)];
                if (m3 >= 0) fn(m1, m2, static_cast<std::int64_t>(m3));
            }
        }
    }
};

// --- projected clouds ---------------------------------------------------------

struct ProjectedCloud {
    std::int64_t lambda = 0;
    double c = 0.0;
    std::vector<std::array<std::int64_t, 3>> lattice;  // exact pre-images
    std::vector<std::array<double, 3>> points;         // x / lambda^{1/c}
    std::int64_t count = 0;
    double max_cnorm_defect = 0.0;  // max | |x|_c^c - 1 | over the cloud
};

// Materializes S_c^3(lambda) / lambda^{1/c}; intended for moderate lambda
// (the streaming paths below handle large spheres).
inline ProjectedCloud project(const RationalExponent& c, std::int64_t lambda,
                              std::int64_t max_points = 40'000'000) {
    const SphereGeometry geo(c, lambda);
    ProjectedCloud cloud;
    cloud.lambda = lambda;
    cloud.c = c.value();
    const double est = main_term_c(c.value(), static_cast<double>(lambda)) * 2.0 + 1e4;
    if (est > static_cast<double>(max_points))
        throw UsageError("project: cloud too large to materialize; use the streaming API");
    const CNorm norm(c.value());
    geo.for_each_triple([&](std::int64_t m1, std::int64_t m2, std::int64_t m3) {
        const std::array<std::int64_t, 3> mag{m1, m2, m3};
        for (int s1 = 0; s1 < (m1 > 0 ? 2 : 1); ++s1)
            for (int s2 = 0; s2 < (m2 > 0 ? 2 : 1); ++s2)
                for (int s3 = 0; s3 < (m3 > 0 ? 2 : 1); ++s3) {
                    std::array<std::int64_t, 3> x{(s1 ? -m1 : m1), (s2 ? -m2 : m2),
                                                  (s3 ? -m3 : m3)};
                    cloud.lattice.push_back(x);
                    cloud.points.push_back({x[0] * geo.proj, x[1] * geo.proj,
                                            x[2] * geo.proj});
                }
        (void)mag;
    });
    cloud.count = static_cast<std::int64_t>(cloud.points.size());
    for (const auto& p : cloud.points)
        cloud.max_cnorm_defect =
            std::max(cloud.max_cnorm_defect, std::abs(norm.norm_c_pow(p) - 1.0));
    return cloud;
}

// --- Weyl sums ----------------------------------------------------------------

// sum_{x in S_c^3(lambda)} e(x . alpha), factorized through the floor values:
// each coordinate contributes t[n] = sum_{|x|: floor|x|^c = n} e(x alpha)
// (real by sign symmetry), and the constraint n1+n2+n3 = lambda is one
// convolution pass. alpha identically zero is evaluated exactly.
inline double sphere_char_sum(const SphereGeometry& geo,
                              const std::array<double, 3>& alpha) {
    const std::size_t n = static_cast<std::size_t>(geo.lambda) + 1;
    const bool zero = alpha[0] == 0.0 && alpha[1] == 0.0 && alpha[2] == 0.0;
    if (zero) {
        std::vector<std::int64_t> t(n, 0);
        for (std::int64_t m = 0; m <= geo.mmax; ++m)
            t[static_cast<std::size_t>(geo.floors[m])] += (m == 0 ? 1 : 2);
        const auto pair = convolve_exact(t, t);
        std::int64_t total = 0;
        for (std::int64_t k = 0; k <= geo.lambda; ++k)
            total += pair[static_cast<std::size_t>(k)] *
                     t[static_cast<std::size_t>(geo.lambda - k)];
        return static_cast<double>(total);
    }
    std::array<std::vector<double>, 3> t;
    for (int j = 0; j < 3; ++j) {
        t[static_cast<std::size_t>(j)].assign(n, 0.0);
        for (std::int64_t m = 0; m <= geo.mmax; ++m) {
            const auto idx = static_cast<std::size_t>(geo.floors[m]);
            if (m == 0)
                t[static_cast<std::size_t>(j)][idx] += 1.0;
            else
                t[static_cast<std::size_t>(j)][idx] +=
                    2.0 * std::cos(2.0 * M_PI *
                                   frac_mul(static_cast<std::uint64_t>(m),
                                            alpha[static_cast<std::size_t>(j)]));
        }
    }
    const auto pair = convolve_real(t[0], t[1]);
    return pairwise_sum_fn<double>(0, geo.lambda + 1, [&](std::int64_t k) {
        return pair[static_cast<std::size_t>(k)] *
               t[2][static_cast<std::size_t>(geo.lambda - k)];
    });
}

struct WeylResult {
    std::complex<double> value;  // cloud average of the test function
    std::complex<double> limit;  // integral against nu_c
    double gap = 0.0;
};

// Cloud average of e(x . freq) against its nu_c limit; uses the factorized
// sum, so it scales to lambda ~ 1e5 and beyond.
inline WeylResult weyl_trig(const SphereGeometry& geo, const std::array<double, 3>& freq,
                            const SurfaceQuadrature& quad) {
    const std::array<double, 3> alpha{freq[0] * geo.proj, freq[1] * geo.proj,
                                      freq[2] * geo.proj};
    const double r = sphere_char_sum(geo, {0.0, 0.0, 0.0});
    if (r == 0.0) throw ComputationError("weyl_trig: empty sphere");
    WeylResult w;
    w.value = sphere_char_sum(geo, alpha) / r;
    if (freq[0] == 0.0 && freq[1] == 0.0 && freq[2] == 0.0) {
        w.limit = 1.0;  // int 1 dnu, exact
    } else {
        // int e(x.freq) dnu = F mu_c(-freq) / mass; real for mu_c by symmetry
        w.limit = fourier_mu(quad, {-freq[0], -freq[1], -freq[2]}).real() / quad.mass();
    }
    w.gap = std::abs(w.value - w.limit);
    return w;
}

// Generic cloud average for materialized clouds (test-function catalog).
template <class F, class G>
WeylResult weyl_sum(const ProjectedCloud& cloud, F&& f, const SurfaceQuadrature& quad,
                    G&& surface_f) {
    if (cloud.count == 0) throw ComputationError("weyl_sum: empty sphere");
    WeylResult w;
    w.value = pairwise_sum_fn<std::complex<double>>(
                  0, cloud.count,
                  [&](std::int64_t i) { return f(cloud.points[static_cast<std::size_t>(i)]); }) /
              static_cast<double>(cloud.count);
    w.limit = quad.integrate([&](double x, double y, double z) {
        return surface_f(std::array<double, 3>{x, y, z});
    }) / quad.mass();
    w.gap = std::abs(w.value - w.limit);
    return w;
}

// --- discrepancy --------------------------------------------------------------

struct DiscrepancyResult {
    double d = 0.0;        // sup over a > 0 of |D(lambda, xi, a)|
    double argmax_a = 0.0;
    double normalized = 0.0;  // d / r_c(lambda)
    std::int64_t count = 0;   // r_c(lambda)
};

// Exact mode: the jump grid holds every distinct positive dot value plus
// midpoints, so the grid sup is the true sup over a > 0 (counting term is
// piecewise constant, measure term monotone).
inline DiscrepancyResult discrepancy_exact(const ProjectedCloud& cloud,
                                           const std::array<double, 3>& xi,
                                           const SurfaceQuadrature& quad) {
    if (cloud.count == 0) throw ComputationError("discrepancy: empty sphere");
    std::vector<double> dots(static_cast<std::size_t>(cloud.count));
    double max_abs_dot = 0.0;
    for (std::size_t i = 0; i < dots.size(); ++i) {
        const auto& p = cloud.points[i];
        dots[i] = p[0] * xi[0] + p[1] * xi[1] + p[2] * xi[2];
        max_abs_dot = std::max(max_abs_dot, std::abs(dots[i]));
    }
    if (max_abs_dot >= 100.0)
        throw ComputationError("discrepancy: upper cap constraint 100 is not vacuous");
    std::sort(dots.begin(), dots.end());
    const CapProfile prof(quad, xi);
    const double mass = prof.mass();
    const double r = static_cast<double>(cloud.count);

    // candidate thresholds: strictly positive jump values and midpoints
    std::vector<double> grid;
    grid.push_back(1e-12);
    for (std::size_t i = 0; i < dots.size(); ++i) {
        if (dots[i] <= 0.0) continue;
        if (grid.empty() || dots[i] != grid.back()) grid.push_back(dots[i]);
        const double next = i + 1 < dots.size() ? dots[i + 1] : dots[i] + 1.0;
        grid.push_back(0.5 * (dots[i] + next));
    }
    DiscrepancyResult res;
    res.count = cloud.count;
    for (const double a : grid) {
        const auto it = std::lower_bound(dots.begin(), dots.end(), a);
        const double n_count = static_cast<double>(dots.end() - it);
        const double d = n_count - r * prof.cap(a) / mass;
        if (std::abs(d) > res.d) {
            res.d = std::abs(d);
            res.argmax_a = a;
        }
    }
    res.normalized = res.d / r;
    return res;
}

// Counting terms #(P cap C_{a,xi}) at the given thresholds, exact integers.
inline std::vector<std::int64_t> cap_counts(const ProjectedCloud& cloud,
                                            const std::array<double, 3>& xi,
                                            const std::vector<double>& thresholds) {
    std::vector<double> dots(static_cast<std::size_t>(cloud.count));
    for (std::size_t i = 0; i < dots.size(); ++i) {
        const auto& p = cloud.points[i];
        dots[i] = p[0] * xi[0] + p[1] * xi[1] + p[2] * xi[2];
    }
    std::sort(dots.begin(), dots.end());
    std::vector<std::int64_t> out;
    out.reserve(thresholds.size());
    for (const double a : thresholds) {
        const auto it = std::lower_bound(dots.begin(), dots.end(), a);
        out.push_back(static_cast<std::int64_t>(dots.end() - it));
    }
    return out;
}

// Binned mode for large spheres: one streaming pass accumulates per-direction
// integer histograms of the projected dot products; the counting term at a
// bin edge is exact (suffix sum), and the sup is taken over positive edges.
struct DotHistograms {
    std::int64_t nbins = 0;
    double lo = 0.0, width = 0.0;
    std::vector<std::vector<std::int64_t>> h;  // per direction
    std::int64_t total = 0;                    // r_c(lambda)

    double edge(std::int64_t k) const { return lo + static_cast<double>(k) * width; }
};

inline DotHistograms dot_histograms(const SphereGeometry& geo,
                                    const std::vector<std::array<double, 3>>& dirs,
                                    std::int64_t nbins = 1 << 14) {
    const double bound = 2.0;  // |dot| <= sqrt(3) (1 + 3/lambda)^{1/c} < 2
    DotHistograms out;
    out.nbins = nbins;
    out.lo = -bound;
    out.width = 2.0 * bound / static_cast<double>(nbins);
    const std::size_t ndir = dirs.size();

    // per-direction coordinate contributions, pre-scaled to bin units
    const double inv_w = 1.0 / out.width;
    std::vector<std::vector<double>> r1(ndir), r2(ndir), r3(ndir);
    for (std::size_t d = 0; d < ndir; ++d) {
        r1[d].resize(static_cast<std::size_t>(geo.mmax) + 1);
        r2[d].resize(static_cast<std::size_t>(geo.mmax) + 1);
        r3[d].resize(static_cast<std::size_t>(geo.mmax) + 1);
        for (std::int64_t m = 0; m <= geo.mmax; ++m) {
            const double base = static_cast<double>(m) * geo.proj * inv_w;
            r1[d][static_cast<std::size_t>(m)] = base * dirs[d][0];
            r2[d][static_cast<std::size_t>(m)] = base * dirs[d][1];
            r3[d][static_cast<std::size_t>(m)] = base * dirs[d][2];
        }
    }
    const double off = -out.lo * inv_w;  // bin = floor(dot * inv_w + off)

    const int threads = thread_count();
    std::vector<std::vector<std::vector<std::int64_t>>> part(
        static_cast<std::size_t>(threads));
    std::vector<std::int64_t> part_total(static_cast<std::size_t>(threads), 0);
    auto worker = [&](int tid) {
        auto& hs = part[static_cast<std::size_t>(tid)];
        hs.assign(ndir, std::vector<std::int64_t>(static_cast<std::size_t>(nbins), 0));
        std::int64_t local_total = 0;
        for (std::int64_t m1 = tid; m1 <= geo.mmax; m1 += threads) {
            const std::int64_t q1 = geo.floors[m1];
            if (q1 > geo.lambda) break;
            for (std::int64_t m2 = 0; m2 <= geo.mmax; ++m2) {
                const std::int64_t q12 = q1 + geo.floors[m2];
                if (q12 > geo.lambda) break;
                const std::int32_t m3 =
                    geo.val_to_m[static_cast<std::size_t>(geo.lambda - q12)];
                if (m3 < 0) continue;
                const auto u3 = static_cast<std::size_t>(m3);
                const bool full = m1 > 0 && m2 > 0 && m3 > 0;
                for (std::size_t d = 0; d < ndir; ++d) {
                    const double a1 = r1[d][static_cast<std::size_t>(m1)];
                    const double a2 = r2[d][static_cast<std::size_t>(m2)];
                    const double a3 = r3[d][u3];
                    auto* hd = hs[d].data();
                    if (full) {
                        const double s = a1 + a2, t = a1 - a2;
                        ++hd[static_cast<std::int64_t>(s + a3 + off)];
                        ++hd[static_cast<std::int64_t>(t + a3 + off)];
                        ++hd[static_cast<std::int64_t>(-t + a3 + off)];
                        ++hd[static_cast<std::int64_t>(-s + a3 + off)];
                        ++hd[static_cast<std::int64_t>(s - a3 + off)];
                        ++hd[static_cast<std::int64_t>(t - a3 + off)];
                        ++hd[static_cast<std::int64_t>(-t - a3 + off)];
                        ++hd[static_cast<std::int64_t>(-s - a3 + off)];
                    } else {
                        for (int s1 = 0; s1 < (m1 > 0 ? 2 : 1); ++s1)
                            for (int s2 = 0; s2 < (m2 > 0 ? 2 : 1); ++s2)
                                for (int s3 = 0; s3 < (m3 > 0 ? 2 : 1); ++s3) {
                                    const double dot = (s1 ? -a1 : a1) + (s2 ? -a2 : a2) +
                                                       (s3 ? -a3 : a3);
                                    ++hd[static_cast<std::int64_t>(dot + off)];
                                }
                    }
                }
                local_total += (m1 > 0 ? 2 : 1) * (m2 > 0 ? 2 : 1) * (m3 > 0 ? 2 : 1);
            }
        }
        part_total[static_cast<std::size_t>(tid)] = local_total;
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
        worker(0);
        for (auto& th : pool) th.join();
    }
    out.h.assign(ndir, std::vector<std::int64_t>(static_cast<std::size_t>(nbins), 0));
    for (int t = 0; t < threads; ++t) {
        out.total += part_total[static_cast<std::size_t>(t)];
        for (std::size_t d = 0; d < ndir; ++d)
            for (std::int64_t k = 0; k < nbins; ++k)
                out.h[d][static_cast<std::size_t>(k)] +=
                    part[static_cast<std::size_t>(t)][d][static_cast<std::size_t>(k)];
    }
    return out;
}

// Discrepancy per direction from histograms: sup over positive bin edges.
inline std::vector<DiscrepancyResult> discrepancy_binned(
    const SphereGeometry& geo, const std::vector<std::array<double, 3>>& dirs,
    const SurfaceQuadrature& quad, std::int64_t nbins = 1 << 14) {
    const DotHistograms hist = dot_histograms(geo, dirs, nbins);
    const double r = static_cast<double>(hist.total);
    std::vector<DiscrepancyResult> out(dirs.size());
    parallel_for(0, static_cast<std::int64_t>(dirs.size()), [&](std::int64_t d) {
        const auto du = static_cast<std::size_t>(d);
        const CapProfile prof(quad, dirs[du]);
        const double mass = prof.mass();
        DiscrepancyResult res;
        res.count = hist.total;
        std::int64_t suffix = 0;
        for (std::int64_t k = hist.nbins; k-- > 0;) {
            const double a = hist.edge(k);
            if (a <= 0.0) break;
            suffix += hist.h[du][static_cast<std::size_t>(k)];
            const double dval = static_cast<double>(suffix) - r * prof.cap(a) / mass;
            if (std::abs(dval) > res.d) {
                res.d = std::abs(dval);
                res.argmax_a = a;
            }
        }
        res.normalized = res.d / r;
        out[du] = res;
    });
    return out;
}

struct DecayPoint {
    std::int64_t lambda = 0;
    std::int64_t count = 0;
    double mean_d = 0.0;
    double max_d = 0.0;
    double mean_normalized = 0.0;
};

struct DiscrepancyDecayReport {
    std::vector<DecayPoint> points;
    std::vector<std::vector<DiscrepancyResult>> per_direction;  // [point][dir]
    double slope_normalized = 0.0;      // log-log slope of mean D/r vs lambda
    double slope_vs_main = 0.0;         // log-log slope of mean D / lambda^{3/c-1}
    double theory_exponent = 0.0;       // -(9-8c)/(5c)
    std::vector<std::array<double, 3>> directions;
};

inline DiscrepancyDecayReport discrepancy_decay_dirs(
    const RationalExponent& c, const std::vector<std::int64_t>& lambdas,
    const std::vector<std::array<double, 3>>& directions, int quad_nq = 96,
    std::int64_t nbins = 1 << 14) {
    if (directions.empty()) throw UsageError("discrepancy_decay: no directions");
    DiscrepancyDecayReport rep;
    rep.directions = directions;
    const auto quad = make_surface_quadrature(c.value(), quad_nq);
    for (const auto l : lambdas) {
        const SphereGeometry geo(c, l);
        auto per_dir = discrepancy_binned(geo, rep.directions, quad, nbins);
        DecayPoint p;
        p.lambda = l;
        p.count = per_dir.front().count;
        for (const auto& d : per_dir) {
            p.mean_d += d.d;
            p.max_d = std::max(p.max_d, d.d);
        }
        p.mean_d /= static_cast<double>(per_dir.size());
        p.mean_normalized = p.mean_d / static_cast<double>(p.count);
        rep.points.push_back(p);
        rep.per_direction.push_back(std::move(per_dir));
    }
    std::vector<double> lx, ln, lm;
    const double cv = c.value();
    for (const auto& p : rep.points) {
        if (p.mean_d <= 0.0) continue;
        lx.push_back(std::log(static_cast<double>(p.lambda)));
        ln.push_back(std::log(p.mean_normalized));
        lm.push_back(std::log(p.mean_d /
                              std::pow(static_cast<double>(p.lambda), 3.0 / cv - 1.0)));
    }
    rep.slope_normalized = linear_fit(lx, ln).slope;
    rep.slope_vs_main = linear_fit(lx, lm).slope;
    rep.theory_exponent = -(9.0 - 8.0 * cv) / (5.0 * cv);
    return rep;
}

inline DiscrepancyDecayReport discrepancy_decay(const RationalExponent& c,
                                                const std::vector<std::int64_t>& lambdas,
                                                int n_directions, std::uint64_t seed,
                                                int quad_nq = 96,
                                                std::int64_t nbins = 1 << 14) {
    auto rng = make_rng(seed);
    std::vector<std::array<double, 3>> dirs;
    for (int i = 0; i < n_directions; ++i) dirs.push_back(random_unit_vector(rng));
    return discrepancy_decay_dirs(c, lambdas, dirs, quad_nq, nbins);
}

}  // namespace csphere
