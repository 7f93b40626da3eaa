#include <catch2/catch_amalgamated.hpp>

#include "csphere/oracles.hpp"
#include "csphere/surface.hpp"

using namespace csphere;

TEST_CASE("gauss legendre sanity") {
    const auto& gl = gauss_legendre(32);
    double s = 0.0, s2 = 0.0;
    for (const auto& [x, w] : gl) {
        s += w;
        s2 += w * x * x;
    }
    CHECK(s == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(s2 == Catch::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("edge rule integrates the singular weight exactly enough") {
    // int_0^1 (1-t^c)^{1/c-1} dt has the closed form Gamma(1/c)^2 c / Gamma(2/c) / (2c)
    // via Beta(1/c, 1/c); check against the Gamma oracle.
    for (double c : {1.05, 1.1, 1.5, 2.0}) {
        const auto rule = edge_rule(c, 1.0 / c - 1.0, 128);
        double s = 0.0;
        for (const auto& [t, w] : rule) s += w;
        const double g = 1.0 / c;
        const double closed =
            oracles::gamma_hp(g) * oracles::gamma_hp(g) / oracles::gamma_hp(2.0 * g) / c;
        // int_0^1 (1-t^c)^{g-1} dt = B(g, g)/c with x = t^c
        CHECK(s == Catch::Approx(closed).epsilon(1e-9));
    }
}

TEST_CASE("surface mass: quadrature vs closed form") {
    for (double c : {21.0 / 20.0, 11.0 / 10.0, 1.5, 2.0}) {
        const auto quad = make_surface_quadrature(c, 128);
        const double m = quad.mass();
        const double closed = surface_mass(c);
        INFO("c = " << c);
        CHECK(std::abs(m - closed) / closed <= 1e-6);
    }
    // c = 2 closed form is 4 pi by Gamma arithmetic
    CHECK(surface_mass(2.0) == Catch::Approx(4.0 * M_PI).epsilon(1e-12));
    CHECK(surface_mass(2.0) ==
          Catch::Approx(8.0 * std::pow(oracles::gamma_hp(0.5), 3) /
                        (4.0 * oracles::gamma_hp(1.5))).epsilon(1e-12));
}

TEST_CASE("odd integrand vanishes and signed permutations agree") {
    const auto quad = make_surface_quadrature(1.3, 192);
    const double odd = quad.integrate([](double, double, double z) { return z; });
    CHECK(std::abs(odd) < 1e-12);
    // a generic smooth f, compared across all 48 signed permutations
    auto f = [](const std::array<double, 3>& p) {
        return std::cos(p[0] + 0.3 * p[1]) * std::exp(0.2 * p[2]) + p[1] * p[1];
    };
    const double base =
        quad.integrate([&](double x, double y, double z) { return f({x, y, z}); });
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& pm : perms) {
        for (int sign_mask = 0; sign_mask < 8; ++sign_mask) {
            const double v = quad.integrate([&](double x, double y, double z) {
                const std::array<double, 3> in{x, y, z};
                std::array<double, 3> arg{};
                for (int k = 0; k < 3; ++k)
                    arg[static_cast<std::size_t>(pm[k])] =
                        (sign_mask & (1 << k) ? -1.0 : 1.0) * in[static_cast<std::size_t>(k)];
                return f(arg);
            });
            REQUIRE(std::abs(v - base) <= 1e-10 * std::abs(base));
        }
    }
}

TEST_CASE("Richardson doubling converges") {
    const auto r = surface_integral_checked(
        [](double x, double y, double) { return std::cos(x) + y * y; }, 1.05, 96);
    CHECK(r.converging);
    CHECK(r.err_estimate < 1e-8 * std::abs(r.value) + 1e-12);
}

TEST_CASE("polar identity") {
    auto gauss = [](const std::array<double, 3>& x) {
        return std::exp(-M_PI * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
    SECTION("gaussian, c = 2") {
        const auto p = polar_check(gauss, 2.0, 4.0, 48, 64, 64);
        CHECK(p.lhs == Catch::Approx(1.0).margin(1e-4));
        CHECK(p.rhs == Catch::Approx(1.0).margin(1e-4));
    }
    SECTION("gaussian, c = 21/20") {
        const auto p = polar_check(gauss, 1.05, 4.0, 48, 96, 64);
        CHECK(p.relerr <= 1e-4);
    }
    SECTION("mollified ball indicator gives the c-ball volume") {
        const double c = 1.05, delta = 0.05;
        const CNorm norm(c);
        const PlateauFn plateau(1.0 - delta, 1.0 + delta);
        auto f = [&](const std::array<double, 3>& x) { return plateau(norm.norm_c(x)); };
        const auto p = polar_check(f, c, 1.5, 96, 96, 96);
        CHECK(p.rhs == Catch::Approx(ball_volume(c)).epsilon(1e-2));
    }
}

TEST_CASE("fourier transform of mu_c") {
    SECTION("zero frequency is the mass") {
        for (double c : {1.05, 1.5, 2.0})
            CHECK(fourier_mu(c, {0.0, 0.0, 0.0}).real() ==
                  Catch::Approx(surface_mass(c)).epsilon(1e-7));
    }
    SECTION("c = 2 matches the classical closed form") {
        for (double r : {1.0, 2.0, 5.0}) {
            const auto dir = std::array<double, 3>{0.36, -0.48, 0.8};
            const auto v = fourier_mu(2.0, {r * dir[0], r * dir[1], r * dir[2]});
            CHECK(std::abs(v.real() - oracles::classical_sphere_ft(r)) <= 1e-5);
        }
    }
    SECTION("cosine fast path equals the generic complex route") {
        const double c = 1.2;
        const std::array<double, 3> xi{1.3, -0.4, 2.2};
        const auto quad = detail::cached_quadrature(c, fourier_nq_for(3.0));
        const auto fast = fourier_mu(quad, xi);
        const auto generic = quad.integrate([&](double x, double y, double z) {
            return unit_phase(-(x * xi[0] + y * xi[1] + z * xi[2]));
        });
        CHECK(std::abs(fast - generic) < 1e-10 * std::abs(generic));
        CHECK(std::abs(generic.imag()) < 1e-10);
    }
    SECTION("resolution guard") {
        const auto quad = make_surface_quadrature(1.5, 48);
        CHECK_THROWS_AS(fourier_mu(quad, {50.0, 0.0, 0.0}), ComputationError);
    }
    SECTION("gradient decays like the value") {
        const double c = 1.3;
        for (double r : {2.0, 8.0}) {
            const auto g = fourier_mu_grad(c, {r, 0.0, 0.0});
            const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
            CHECK(gn <= 30.0 / (1.0 + r));
        }
    }
}

TEST_CASE("decay profile is seeded and bounded") {
    const auto rows = decay_profile(1.05, {2.0, 4.0, 8.0}, 8, 17);
    REQUIRE(rows.size() == 3);
    const auto rows2 = decay_profile(1.05, {2.0, 4.0, 8.0}, 8, 17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].max_scaled_abs == rows2[i].max_scaled_abs);
        CHECK(rows[i].max_scaled_abs > 0.0);
        CHECK(rows[i].max_scaled_abs < 10.0 * surface_mass(1.05));
    }
}

TEST_CASE("cap measures") {
    const std::array<double, 3> e3{0.0, 0.0, 1.0};
    SECTION("half sphere and empty cap") {
        for (double c : {1.05, 1.5}) {
            const auto quad = make_surface_quadrature(c, 96);
            CHECK(cap_measure(CapSpec(e3, 1e-9), quad) == Catch::Approx(0.5).margin(2e-3));
            CHECK(cap_measure(CapSpec(e3, 1.01), quad) == 0.0);
        }
    }
    SECTION("Archimedes at c = 2") {
        const auto quad = make_surface_quadrature(2.0, 128);
        CHECK(cap_measure(CapSpec(e3, 0.5), quad) == Catch::Approx(0.25).margin(2e-3));
        const std::array<double, 3> tilt{0.6, 0.0, 0.8};
        CHECK(cap_measure(CapSpec(tilt, 0.5), quad) == Catch::Approx(0.25).margin(2e-3));
        CHECK(cap_measure(CapSpec(tilt, 0.25), quad) ==
              Catch::Approx(oracles::classical_cap_nu(0.25)).margin(2e-3));
    }
    SECTION("monotone in a, complementary caps sum to one") {
        const auto quad = make_surface_quadrature(1.05, 96);
        double prev = 1.0;
        for (double a : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            const double v = cap_measure(CapSpec(e3, a), quad);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        const std::array<double, 3> me3{0.0, 0.0, -1.0};
        const double total = cap_measure(CapSpec(e3, 1e-6), quad) +
                             cap_measure(CapSpec(me3, 1e-6), quad);
        CHECK(total == Catch::Approx(1.0).margin(4e-3));
    }
    SECTION("smoothing sandwich with sqrt(delta) gap") {
        const auto quad = make_surface_quadrature(1.05, 128);
        const CapSpec cap({0.0, 0.0, 1.0}, 0.5);
        double fitted = 0.0;
        for (int k = 3; k <= 7; ++k) {
            const double delta = std::pow(2.0, -k);
            const auto s = cap_sandwich(cap, delta, quad);
            CHECK(s.lower <= s.sharp + 1e-3);
            CHECK(s.sharp <= s.upper + 1e-3);
            fitted = std::max(fitted, (s.upper - s.lower) / std::sqrt(delta));
        }
        CHECK(fitted < 2.0);
    }
    SECTION("unit direction required") {
        CHECK_THROWS_AS(CapSpec({1.0, 1.0, 0.0}, 0.3), UsageError);
    }
}
