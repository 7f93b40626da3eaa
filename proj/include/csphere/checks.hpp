#pragma once

#include <functional>
#include <string>
#include <vector>

#include "csphere/averages.hpp"
#include "csphere/counting.hpp"
#include "csphere/equidist.hpp"
#include "csphere/expsums.hpp"
#include "csphere/oracles.hpp"
#include "csphere/surface.hpp"

namespace csphere::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

using CheckList = std::vector<CheckResult>;

inline void add(CheckList& out, const std::string& name, bool pass,
                const std::string& detail = {}) {
    out.push_back({name, pass, detail});
}

inline CheckList check_count() {
    CheckList out;
    const auto h = RegVarFunction::parse_spec("pow:c=21/20");
    const auto te = decompose_signs(h, 200, CountMethod::enumeration);
    const auto tf = decompose_signs(h, 200, CountMethod::fft);
    const auto tb = oracles::brute_table(h.exponent, 200);
    add(out, "enum/fft/brute agree (c=21/20, lmax=200)",
        te.counts == tf.counts && te.counts == tb);
    const auto sq = RegVarFunction::parse_spec("pow:c=2");
    const auto ts = decompose_signs(sq, 64, CountMethod::fft);
    add(out, "r_2(4) = 6 and r_2(7) = 0", ts.at(4) == 6 && ts.at(7) == 0);
    std::int64_t total = 0;
    for (const auto v : te.counts) total += v;
    add(out, "mass conservation vs ball enumeration",
        total == oracles::brute_ball_count(h.exponent, 200));
    return out;
}

inline CheckList check_asym() {
    CheckList out;
    const auto id = RegVarFunction::parse_spec("pow:c=1");
    const auto rep = asymptotic_report(decompose_signs(id, 2048, CountMethod::fft), 1.0);
    add(out, "identity window ratio -> 1", rep.windows.back().deviation < 0.02);
    add(out, "identity cumulative matches the ball volume", rep.cumulative_rel_err < 0.02);
    return out;
}

inline CheckList check_jfun() {
    CheckList out;
    const InverseEval phi(RegVarFunction::parse_spec("pow:c=1"));
    add(out, "j2 identity closed form", j2(phi, phi, 100) == 99.0);
    add(out, "j3 identity closed form",
        std::abs(j3(phi, phi, phi, 100) - 99.0 * 98.0 / 2.0) < 1e-6);
    return out;
}

inline CheckList check_expsum() {
    CheckList out;
    const auto id = RegVarFunction::parse_spec("pow:c=1");
    const auto gap = fg_gap(id, 256, 0.1);
    add(out, "identity F = G up to the N0 boundary", gap.sup <= 1.0 + 1e-9);
    const auto h = RegVarFunction::parse_spec("pow:c=21/20");
    const auto s = floor_set(h, 1000);
    const std::size_t m = fft_size_for(16 * 1000);
    const auto vals = g_values_on_grid(s, m);
    double mass = 0.0;
    for (const auto& v : vals) mass += std::norm(v);
    mass /= static_cast<double>(m);
    add(out, "Plancherel mass within 1%",
        std::abs(mass - static_cast<double>(s.elements.size())) <=
            0.01 * static_cast<double>(s.elements.size()));
    return out;
}

inline CheckList check_vdc() {
    CheckList out;
    auto rng = make_rng(1);
    bool all = true;
    for (int i = 0; i < 5; ++i) {
        const double n = 500.0 + static_cast<double>(rng() % 2000);
        const double alpha = 1.0 / n + 0.2 * std::uniform_real_distribution<double>(0, 1)(rng);
        const auto res = vdc_check([alpha](double x) { return alpha * x * x; },
                                   [alpha](double) { return 2.0 * alpha; }, 1.0, n,
                                   2.0 * alpha, 1.0);
        all = all && res.pass;
    }
    add(out, "quadratic van der Corput with C0 = 10", all);
    return out;
}

inline CheckList check_surface() {
    CheckList out;
    for (double c : {21.0 / 20.0, 2.0}) {
        const auto quad = make_surface_quadrature(c, 128);
        const double rel = std::abs(quad.mass() - surface_mass(c)) / surface_mass(c);
        add(out, "mass quadrature vs closed form (c = " + fmt_g17(c) + ")", rel <= 1e-6,
            "relerr = " + fmt_g17(rel));
    }
    return out;
}

inline CheckList check_fourier() {
    CheckList out;
    const auto v = fourier_mu(2.0, {1.0, 0.0, 0.0});
    add(out, "c = 2 closed form at |xi| = 1",
        std::abs(v.real() - oracles::classical_sphere_ft(1.0)) <= 1e-5);
    add(out, "zero frequency equals the mass",
        std::abs(fourier_mu(1.05, {0.0, 0.0, 0.0}).real() - surface_mass(1.05)) <=
            1e-5 * surface_mass(1.05));
    return out;
}

inline CheckList check_cap() {
    CheckList out;
    const auto quad = make_surface_quadrature(2.0, 128);
    const double v = cap_measure(CapSpec({0.0, 0.0, 1.0}, 0.5), quad);
    add(out, "Archimedes cap at c = 2", std::abs(v - 0.25) <= 2e-3);
    const auto q1 = make_surface_quadrature(1.05, 96);
    const double total = cap_measure(CapSpec({0.0, 0.0, 1.0}, 1e-6), q1) +
                         cap_measure(CapSpec({0.0, 0.0, -1.0}, 1e-6), q1);
    add(out, "complementary caps sum to 1", std::abs(total - 1.0) <= 4e-3);
    return out;
}

inline CheckList check_project() {
    CheckList out;
    const RationalExponent c(21, 20);
    const auto cloud = project(c, 31);
    auto ref = oracles::brute_cloud(c, 31);
    auto mine = cloud.lattice;
    std::sort(mine.begin(), mine.end());
    std::sort(ref.begin(), ref.end());
    add(out, "cloud equals the brute enumeration (lambda = 31)", mine == ref);
    add(out, "c-norm defect below 3/lambda", cloud.max_cnorm_defect <= 3.0 / 31.0);
    return out;
}

inline CheckList check_weyl() {
    CheckList out;
    const RationalExponent c(21, 20);
    const SphereGeometry geo(c, 60);
    const auto cloud = oracles::brute_cloud(c, 60);
    std::complex<double> direct{};
    for (const auto& x : cloud)
        direct += unit_phase(0.1 * x[0] + 0.2 * x[1] + 0.3 * x[2]);
    add(out, "factorized character sum matches enumeration",
        std::abs(sphere_char_sum(geo, {0.1, 0.2, 0.3}) - direct.real()) < 1e-6);
    return out;
}

inline CheckList check_disc() {
    CheckList out;
    const RationalExponent c(21, 20);
    const auto quad = make_surface_quadrature(c.value(), 96);
    const auto cloud = project(c, 10);
    const std::array<double, 3> e3{0.0, 0.0, 1.0};
    const auto res = discrepancy_exact(cloud, e3, quad);
    bool counting_ok = true;
    const std::vector<double> thresholds{0.2, 0.5, 0.9};
    const auto counts = cap_counts(cloud, e3, thresholds);
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        counting_ok =
            counting_ok && counts[i] == oracles::brute_cap_count(c, 10, e3, thresholds[i]);
    add(out, "counting term equals brute recount (lambda = 10)", counting_ok);
    add(out, "normalized discrepancy within [0, 1]",
        res.normalized >= 0.0 && res.normalized <= 1.0);
    return out;
}

inline CheckList check_kernels() {
    CheckList out;
    const RationalExponent c(21, 20);
    const KernelField field(c, 50);
    const double defect = field.partition_defect_max();
    add(out, "partition identity at lambda = 50", defect <= 1e-6,
        "max defect = " + fmt_g17(defect));
    const double m = field.mass();
    add(out, "kernel mass within [1/20, 20]", m >= 0.05 && m <= 20.0,
        "mass = " + fmt_g17(m));
    add(out, "tabulated psi transform tail below 1e-11",
        detail::cached_invpsi(c.value()).tail_max() < 1e-11);
    return out;
}

inline CheckList check_average() {
    CheckList out;
    const RationalExponent c(21, 20);
    SparseFn f;
    for (std::int64_t x = -10; x <= 10; ++x) f[{x, 0, 0}] = 1.0;
    const auto avg = discrete_average(f, c, 20);
    double l1_in = 0.0, l1_out = 0.0;
    for (const auto& [k, v] : f) l1_in += std::abs(v);
    for (const auto& [k, v] : avg) l1_out += std::abs(v);
    add(out, "discrete average preserves l1 mass", std::abs(l1_out - l1_in) < 1e-9);
    const auto quad = make_surface_quadrature(1.05, 64);
    const double cv = continuous_average(
        [](const std::array<double, 3>&) { return 1.0; }, {0.0, 0.0, 0.0}, 1.0, quad);
    add(out, "continuous average of 1 is the surface mass",
        std::abs(cv - surface_mass(1.05)) <= 1e-5 * surface_mass(1.05));
    return out;
}

inline CheckList check_ergodic() {
    CheckList out;
    const auto rows =
        torus_ergodic_run({0.5, 0.5, 0.5}, {2, 2, 2}, {20, 40}, RationalExponent(21, 20));
    bool ok = true;
    for (const auto& r : rows) ok = ok && !r.empty && r.multiplier == std::complex<double>(1.0);
    add(out, "integral phases give multiplier exactly 1", ok);
    return out;
}

inline CheckList check_variation() {
    CheckList out;
    auto rng = make_rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ur(1.0, 4.0);
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
        std::vector<double> seq(3 + rng() % 8);
        for (auto& x : seq) x = u(rng);
        const double r = ur(rng);
        ok = ok && std::abs(variation_seminorm(seq, r).value -
                            oracles::brute_variation(seq, r)) < 1e-10;
    }
    add(out, "DP equals exhaustive subsequence search", ok);
    return out;
}

inline CheckList check_minor() {
    CheckList out;
    const auto rows = minor_arc_profile(RationalExponent(21, 20), {16, 32});
    add(out, "bracket sane and positive",
        rows.size() == 2 && rows[0].value_upper >= rows[0].value_core &&
            rows[0].value_core > 0.0);
    return out;
}

inline CheckList run_checks(const std::string& subcommand) {
    if (subcommand == "count") return check_count();
    if (subcommand == "asym") return check_asym();
    if (subcommand == "jfun") return check_jfun();
    if (subcommand == "expsum") return check_expsum();
    if (subcommand == "vdc") return check_vdc();
    if (subcommand == "surface") return check_surface();
    if (subcommand == "fourier") return check_fourier();
    if (subcommand == "cap") return check_cap();
    if (subcommand == "project") return check_project();
    if (subcommand == "weyl") return check_weyl();
    if (subcommand == "disc") return check_disc();
    if (subcommand == "kernels") return check_kernels();
    if (subcommand == "average") return check_average();
    if (subcommand == "ergodic") return check_ergodic();
    if (subcommand == "variation") return check_variation();
    if (subcommand == "minor") return check_minor();
    throw UsageError("no check suite for subcommand '" + subcommand + "'");
}

}  // namespace csphere::checks
