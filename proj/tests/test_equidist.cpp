#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "csphere/equidist.hpp"
#include "csphere/oracles.hpp"

using namespace csphere;

TEST_CASE("projected clouds") {
    SECTION("euclidean lambda = 1 is the six unit vectors") {
        const auto cloud = project(RationalExponent(2, 1), 1);
        CHECK(cloud.count == 6);
        for (const auto& x : cloud.lattice)
            CHECK(std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]) == 1);
    }
    SECTION("count matches the counting module") {
        const RationalExponent c(21, 20);
        const auto h = RegVarFunction::pure_power(c);
        const auto table = decompose_signs(h, 128, CountMethod::fft);
        for (std::int64_t l : {10, 57, 100})
            CHECK(project(c, l).count == table.at(l));
    }
    SECTION("cloud points satisfy the defining equation bit-exactly") {
        const RationalExponent c(21, 20);
        const auto cloud = project(c, 77);
        for (const auto& x : cloud.lattice) {
            const auto q = floor_pow(std::llabs(x[0]), c) + floor_pow(std::llabs(x[1]), c) +
                           floor_pow(std::llabs(x[2]), c);
            REQUIRE(q == 77);
        }
        CHECK(cloud.max_cnorm_defect <= 3.0 / 77.0);
    }
    SECTION("matches the brute cloud") {
        const RationalExponent c(21, 20);
        auto mine = project(c, 31).lattice;
        auto ref = oracles::brute_cloud(c, 31);
        std::sort(mine.begin(), mine.end());
        std::sort(ref.begin(), ref.end());
        CHECK(mine == ref);
    }
}

TEST_CASE("sphere character sums") {
    const RationalExponent c(21, 20);
    const SphereGeometry geo(c, 60);
    const auto cloud = oracles::brute_cloud(c, 60);
    SECTION("zero frequency is the exact count") {
        CHECK(sphere_char_sum(geo, {0.0, 0.0, 0.0}) ==
              static_cast<double>(cloud.size()));
    }
    SECTION("factorized sum equals direct enumeration") {
        for (const auto alpha : {std::array<double, 3>{0.1, 0.2, 0.3},
                                 std::array<double, 3>{0.618, 0.0, 0.5}}) {
            std::complex<double> direct{};
            for (const auto& x : cloud)
                direct += unit_phase(x[0] * alpha[0] + x[1] * alpha[1] + x[2] * alpha[2]);
            // imaginary parts cancel by sign symmetry
            CHECK(std::abs(direct.imag()) < 1e-9);
            CHECK(sphere_char_sum(geo, alpha) ==
                  Catch::Approx(direct.real()).margin(1e-6));
        }
    }
}

TEST_CASE("weyl sums") {
    const RationalExponent c(21, 20);
    const auto quad = make_surface_quadrature(c.value(), 96);
    SECTION("constant test function has exactly zero gap") {
        const auto cloud = project(c, 100);
        const auto w = weyl_sum(
            cloud, [](const std::array<double, 3>&) { return std::complex<double>(1.0); },
            quad, [](const std::array<double, 3>&) { return std::complex<double>(1.0); });
        CHECK(w.gap == 0.0);
        const SphereGeometry geo(c, 100);
        CHECK(weyl_trig(geo, {0.0, 0.0, 0.0}, quad).gap == 0.0);
    }
    SECTION("coordinate function: both sides vanish") {
        const auto cloud = project(c, 100);
        const auto w = weyl_sum(
            cloud,
            [](const std::array<double, 3>& p) { return std::complex<double>(p[0]); },
            quad,
            [](const std::array<double, 3>& p) { return std::complex<double>(p[0]); });
        CHECK(std::abs(w.value) < 1e-12);
        CHECK(std::abs(w.limit) < 1e-12);
    }
    SECTION("trig function gap shrinks with lambda") {
        const std::array<double, 3> freq{1.0, 2.0, 3.0};
        const SphereGeometry g1(c, 1000);
        const SphereGeometry g2(c, 30000);
        const auto w1 = weyl_trig(g1, freq, quad);
        const auto w2 = weyl_trig(g2, freq, quad);
        CHECK(w2.gap < w1.gap + 0.02);
        CHECK(w2.gap < 0.2);
    }
}

TEST_CASE("discrepancy, exact mode") {
    SECTION("euclidean lambda = 1 against Archimedes") {
        const auto cloud = project(RationalExponent(2, 1), 1);
        const auto quad = make_surface_quadrature(2.0, 128);
        const auto res = discrepancy_exact(cloud, {0.0, 0.0, 1.0}, quad);
        // D(a) = 1 - 6 (1-a)/2 = 3a - 2 on (0, 1]; sup as a -> 0+ is 2
        CHECK(res.d == Catch::Approx(2.0).margin(2e-2));
        CHECK(res.argmax_a < 1e-6);
        CHECK(res.normalized == Catch::Approx(res.d / 6.0).epsilon(1e-12));
    }
    SECTION("counting term equals the brute recount at every jump") {
        const RationalExponent c(21, 20);
        const auto cloud = project(c, 10);
        const std::array<double, 3> xi{0.0, 0.0, 1.0};
        std::vector<double> dots;
        for (const auto& p : cloud.points)
            dots.push_back(p[0] * xi[0] + p[1] * xi[1] + p[2] * xi[2]);
        std::sort(dots.begin(), dots.end());
        dots.erase(std::unique(dots.begin(), dots.end()), dots.end());
        std::vector<double> grid;
        for (std::size_t i = 0; i < dots.size(); ++i) {
            if (dots[i] > 0) grid.push_back(dots[i]);
            if (i + 1 < dots.size()) grid.push_back(0.5 * (dots[i] + dots[i + 1]));
        }
        const auto counts = cap_counts(cloud, xi, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            REQUIRE(counts[i] == oracles::brute_cap_count(c, 10, xi, grid[i]));
    }
    SECTION("jump grid attains the sup: random extra thresholds never beat it") {
        const RationalExponent c(21, 20);
        const auto cloud = project(c, 40);
        const auto quad = make_surface_quadrature(c.value(), 96);
        const std::array<double, 3> xi{0.6, -0.64, 0.48};
        const std::array<double, 3> xin{xi[0] / 1.0, xi[1], xi[2]};
        const double n2 = std::sqrt(xin[0] * xin[0] + xin[1] * xin[1] + xin[2] * xin[2]);
        const std::array<double, 3> u{xin[0] / n2, xin[1] / n2, xin[2] / n2};
        const auto res = discrepancy_exact(cloud, u, quad);
        const CapProfile prof(quad, u);
        std::vector<double> dots;
        for (const auto& p : cloud.points)
            dots.push_back(p[0] * u[0] + p[1] * u[1] + p[2] * u[2]);
        std::sort(dots.begin(), dots.end());
        auto rng = make_rng(99);
        std::uniform_real_distribution<double> ua(1e-6, 1.2);
        for (int k = 0; k < 10; ++k) {
            const double a = ua(rng);
            const auto it = std::lower_bound(dots.begin(), dots.end(), a);
            const double d = static_cast<double>(dots.end() - it) -
                             static_cast<double>(cloud.count) * prof.cap(a) / prof.mass();
            REQUIRE(std::abs(d) <= res.d + 1e-9);
        }
    }
    SECTION("antipodal directions: counting terms agree exactly") {
        const RationalExponent c(21, 20);
        const auto cloud = project(c, 40);
        // the dot multiset is symmetric, so #(dot_xi >= a) = #(dot_-xi >= a)
        const std::array<double, 3> xi{0.48, -0.6, 0.64};
        const std::array<double, 3> mxi{-0.48, 0.6, -0.64};
        const std::vector<double> thresholds{0.05, 0.3, 0.77, 1.1};
        CHECK(cap_counts(cloud, xi, thresholds) == cap_counts(cloud, mxi, thresholds));
        // the full statistic agrees up to the cap-interpolation scale
        const auto quad = make_surface_quadrature(c.value(), 96);
        const auto a = discrepancy_exact(cloud, {0.0, 0.0, 1.0}, quad);
        const auto b = discrepancy_exact(cloud, {0.0, 0.0, -1.0}, quad);
        CHECK(a.d == Catch::Approx(b.d).epsilon(0.01));
    }
}

TEST_CASE("discrepancy, binned mode") {
    const RationalExponent c(21, 20);
    const auto quad = make_surface_quadrature(c.value(), 96);
    auto rng = make_rng(7);
    std::vector<std::array<double, 3>> dirs;
    for (int i = 0; i < 4; ++i) dirs.push_back(random_unit_vector(rng));
    SECTION("histogram totals match the counting table") {
        const SphereGeometry geo(c, 256);
        const auto h = RegVarFunction::pure_power(c);
        const auto table = decompose_signs(h, 256, CountMethod::fft);
        const auto hist = dot_histograms(geo, dirs, 1 << 12);
        CHECK(hist.total == table.at(256));
        std::int64_t s = 0;
        for (const auto v : hist.h[0]) s += v;
        CHECK(s == hist.total);
    }
    SECTION("binned agrees with exact mode") {
        const SphereGeometry geo(c, 256);
        const auto cloud = project(c, 256);
        const auto binned = discrepancy_binned(geo, dirs, quad, 1 << 14);
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const auto exact = discrepancy_exact(cloud, dirs[d], quad);
            CHECK(binned[d].d ==
                  Catch::Approx(exact.d).epsilon(0.03).margin(0.03 * exact.d + 2.0));
        }
    }
    SECTION("thread count does not change the histograms") {
        const SphereGeometry geo(c, 200);
        set_thread_count(1);
        const auto h1 = dot_histograms(geo, dirs, 1 << 12);
        set_thread_count(2);
        const auto h2 = dot_histograms(geo, dirs, 1 << 12);
        set_thread_count(0);
        CHECK(h1.h == h2.h);
    }
}

TEST_CASE("weyl sums against mollified cap indicators respect the discrepancy") {
    const RationalExponent c(21, 20);
    const auto quad = make_surface_quadrature(c.value(), 128);
    const auto cloud = project(c, 200);
    const std::array<double, 3> xi{0.0, 0.0, 1.0};
    const double a = 0.5;
    const auto res = discrepancy_exact(cloud, xi, quad);
    const CapProfile prof(quad, xi);
    for (const double delta : {0.25, 0.125, 0.0625}) {
        auto phi = [&](const std::array<double, 3>& p) {
            return std::complex<double>(smoothed_step_plus(p[2], a, delta));
        };
        const auto w = weyl_sum(cloud, phi, quad, [&](const std::array<double, 3>& p) {
            return std::complex<double>(smoothed_step_plus(p[2], a, delta));
        });
        // |gap| <= D/r + mollification slack; the sandwich lemma gives the
        // slack scale C delta^{1/2}
        const auto sandwich = cap_sandwich(CapSpec(xi, a), delta, quad);
        const double slack = (sandwich.upper - sandwich.lower) + 2.0 * std::sqrt(delta);
        REQUIRE(w.gap <= res.normalized + slack);
    }
}

TEST_CASE("discrepancy decay report") {
    const RationalExponent c(21, 20);
    const auto rep = discrepancy_decay(c, {128, 256, 512, 1024}, 4, 11, 64, 1 << 12);
    REQUIRE(rep.points.size() == 4);
    for (const auto& p : rep.points) {
        CHECK(p.mean_normalized <= 1.0);
        CHECK(p.mean_normalized > 0.0);
    }
    CHECK(rep.theory_exponent == Catch::Approx(-(9.0 - 8.4) / 5.25));
    // reproducibility with the same seed
    const auto rep2 = discrepancy_decay(c, {128, 256, 512, 1024}, 4, 11, 64, 1 << 12);
    CHECK(rep.points.back().mean_d == rep2.points.back().mean_d);
}
