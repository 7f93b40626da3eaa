#include <catch2/catch_amalgamated.hpp>

#include <mpfr.h>

#include <atomic>
#include <cmath>

#include "csphere/regvar.hpp"

using namespace csphere;

namespace {

// Independent high-precision floor of h(m) for the catalog, used as a test
// oracle only (straight MPFR evaluation at 320 bits, no enclosure logic).
long long hp_floor(double scale, double c, double beta, bool xlogx, long long m) {
    mpfr_t x, v, t;
    mpfr_inits2(320, x, v, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_si(x, m, MPFR_RNDN);
    if (xlogx) {
        mpfr_log(v, x, MPFR_RNDN);
        mpfr_mul(v, v, x, MPFR_RNDN);
    } else {
        mpfr_set_d(t, c, MPFR_RNDN);
        mpfr_pow(v, x, t, MPFR_RNDN);
        if (beta != 0.0) {
            mpfr_log(t, x, MPFR_RNDN);
            mpfr_t b;
            mpfr_init2(b, 320);
            mpfr_set_d(b, beta, MPFR_RNDN);
            mpfr_pow(t, t, b, MPFR_RNDN);
            mpfr_mul(v, v, t, MPFR_RNDN);
            mpfr_clear(b);
        }
        mpfr_mul_d(v, v, scale, MPFR_RNDN);
    }
    mpfr_floor(v, v);
    const long long r = mpfr_get_si(v, MPFR_RNDN);
    mpfr_clears(x, v, t, static_cast<mpfr_ptr>(nullptr));
    return r;
}

// floor(m^c) and its distance to the nearest integer at 256-bit precision.
std::pair<long long, double> hp_pow_floor(long long m, double c) {
    mpfr_t x, v, t;
    mpfr_inits2(256, x, v, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_si(x, m, MPFR_RNDN);
    mpfr_set_d(t, c, MPFR_RNDN);
    mpfr_pow(v, x, t, MPFR_RNDN);
    mpfr_t fl;
    mpfr_init2(fl, 256);
    mpfr_floor(fl, v);
    const long long r = mpfr_get_si(fl, MPFR_RNDN);
    mpfr_sub(t, v, fl, MPFR_RNDN);
    double frac = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clears(x, v, t, fl, static_cast<mpfr_ptr>(nullptr));
    return {r, std::min(frac, 1.0 - frac)};
}

}  // namespace

TEST_CASE("floor_pow basics") {
    CHECK(floor_pow(5, RationalExponent(3, 2)) == 11);
    CHECK(floor_pow(0, RationalExponent(21, 20)) == 0);
    CHECK(floor_pow(1, RationalExponent(21, 20)) == 1);
    CHECK(floor_pow(2, RationalExponent(21, 20)) == 2);
    // integer 20th root of 14^21, cross-checked with high-precision log/exp
    const auto [hp, dist] = hp_pow_floor(14, 21.0 / 20.0);
    REQUIRE(dist > 1e-9);
    CHECK(floor_pow(14, RationalExponent(21, 20)) == hp);
    CHECK(floor_pow(14, RationalExponent(21, 20)) == 15);
}

TEST_CASE("floor_pow agrees with 256-bit floating evaluation away from integers") {
    for (const auto& [p, q] : {std::pair{3, 2}, {21, 20}, {11, 10}}) {
        const RationalExponent c(p, q);
        const double cv = c.value();
        for (long long m : {2LL, 3LL, 17LL, 100LL, 999LL, 12345LL, 99991LL, 524287LL,
                            999999LL}) {
            const auto [hp, dist] = hp_pow_floor(m, cv);
            if (dist >= std::ldexp(1.0, -40)) CHECK(floor_pow(m, c) == hp);
        }
    }
}

// Full sweep of the exactness contract; minutes of MPFR time, so hidden
// behind the tag: run with `unit_tests "[.slow]"`.
TEST_CASE("floor_pow exactness sweep over m <= 1e6", "[.slow]") {
    for (const auto& [p, q] : {std::pair{3, 2}, {21, 20}, {11, 10}}) {
        const RationalExponent c(p, q);
        const double cv = c.value();
        std::atomic<long long> bad{0};
        parallel_for(2, 1000001, [&](std::int64_t m) {
            const auto [hp, dist] = hp_pow_floor(m, cv);
            if (dist >= std::ldexp(1.0, -40) && floor_pow(m, c) != hp) ++bad;
        });
        REQUIRE(bad == 0);
    }
}

TEST_CASE("rational exponent invariants") {
    const RationalExponent c(42, 40);
    CHECK(c.num == 21);
    CHECK(c.den == 20);
    CHECK(c.str() == "21/20");
    // gamma * c = 1 exactly as rationals
    CHECK(c.num * c.den == c.den * c.num);
    CHECK(RationalExponent::parse("2").is_two());
    CHECK_THROWS_AS(RationalExponent::parse("5/2"), UsageError);
    CHECK_THROWS_AS(RationalExponent(1, 0), UsageError);
    CHECK_THROWS_AS(RationalExponent::parse("x/2"), UsageError);
}

TEST_CASE("floor_eval certified against high-precision oracle") {
    SECTION("pure power delegates to the exact root") {
        const auto h = RegVarFunction::pure_power(RationalExponent(21, 20));
        CHECK(h.floor_eval(2) == 2);
        for (long long m : {1LL, 7LL, 100LL, 4096LL})
            CHECK(h.floor_eval(m) == floor_pow(m, h.exponent));
    }
    SECTION("log power") {
        const auto h = RegVarFunction::log_power(RationalExponent(3, 2), 1.0);
        for (long long m = h.n0; m < h.n0 + 50; ++m)
            CHECK(h.floor_eval(m) == hp_floor(1.0, 1.5, 1.0, false, m));
        CHECK(h.floor_eval(10) == 72);  // floor(10^1.5 * ln 10)
    }
    SECTION("x log x") {
        const auto h = RegVarFunction::x_log_x();
        for (long long m = h.n0; m < h.n0 + 50; ++m)
            CHECK(h.floor_eval(m) == hp_floor(1.0, 1.0, 0.0, true, m));
        CHECK(h.floor_eval(3) == 3);  // floor(3 ln 3)
    }
    SECTION("scaled pure power") {
        const auto h = RegVarFunction::pure_power(RationalExponent(21, 20), 2.5);
        for (long long m = h.n0; m < h.n0 + 50; ++m)
            CHECK(h.floor_eval(m) == hp_floor(2.5, 1.05, 0.0, false, m));
    }
}

TEST_CASE("monotonicity of certified floors for c > 1") {
    for (const auto& h :
         {RegVarFunction::pure_power(RationalExponent(21, 20)),
          RegVarFunction::log_power(RationalExponent(3, 2), -1.0)}) {
        std::int64_t prev = h.floor_eval(h.n0);
        for (std::int64_t m = h.n0 + 1; m < h.n0 + 500; ++m) {
            const std::int64_t cur = h.floor_eval(m);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("inverse evaluation") {
    SECTION("pure power closed form") {
        const auto h = RegVarFunction::pure_power(RationalExponent(21, 20));
        const InverseEval phi(h);
        CHECK(phi(1024.0) == Catch::Approx(std::pow(1024.0, 20.0 / 21.0)).epsilon(1e-14));
        const double g = 20.0 / 21.0;
        for (double y : {10.0, 1e3, 1e6, 1e9}) {
            CHECK(phi.deriv(y, 1) ==
                  Catch::Approx(g * std::pow(y, g - 1)).epsilon(1e-10));
            CHECK(phi.deriv(y, 2) ==
                  Catch::Approx(g * (g - 1) * std::pow(y, g - 2)).epsilon(1e-10));
            CHECK(phi.deriv(y, 3) ==
                  Catch::Approx(g * (g - 1) * (g - 2) * std::pow(y, g - 3)).epsilon(1e-10));
        }
    }
    SECTION("identity") {
        const auto h = RegVarFunction::pure_power(RationalExponent(1, 1));
        const InverseEval phi(h);
        CHECK(phi(17.0) == Catch::Approx(17.0));
        CHECK(phi.deriv(5.0, 1) == Catch::Approx(1.0));
        CHECK(phi.deriv(5.0, 2) == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("log power round trip") {
        const auto h = RegVarFunction::log_power(RationalExponent(3, 2), 1.0);
        const InverseEval phi(h);
        CHECK(std::abs(h.eval(phi(100.0)) - 100.0) <= 1e-12 * 100.0);
        // 1e4 log-spaced round trips
        const double ylo = phi.min_y() + 1.0, yhi = 1e8;
        for (int i = 0; i < 10000; ++i) {
            const double y = ylo * std::pow(yhi / ylo, i / 9999.0);
            REQUIRE(std::abs(h.eval(phi(y)) - y) <= 1e-13 * y);
        }
    }
    SECTION("derivative signs: phi' > 0, phi'' < 0 for c > 1") {
        const auto h = RegVarFunction::log_power(RationalExponent(21, 20), 0.5);
        const InverseEval phi(h);
        for (double y : {50.0, 500.0, 5e4}) {
            CHECK(phi.deriv(y, 1) > 0.0);
            CHECK(phi.deriv(y, 2) < 0.0);
        }
    }
    SECTION("chain rule matches finite differences") {
        const auto h = RegVarFunction::log_power(RationalExponent(3, 2), 1.0);
        const InverseEval phi(h);
        const double y = 5000.0, step = 0.5;
        const double fd2 = (phi(y + step) - 2 * phi(y) + phi(y - step)) / (step * step);
        CHECK(phi.deriv(y, 2) == Catch::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("choose_n0") {
    CHECK(RegVarFunction::pure_power(RationalExponent(21, 20)).n0 == 1);
    CHECK(RegVarFunction::pure_power(RationalExponent(1, 1)).n0 == 1);
    const auto h = RegVarFunction::log_power(RationalExponent(3, 2), -1.0);
    // least N with h'(N) >= 1 over the closed-form derivative
    CHECK(h.deriv(static_cast<double>(h.n0), 1) >= 1.0);
    if (h.n0 > h.x0) CHECK(h.deriv(static_cast<double>(h.n0) - 1.0, 1) < 1.0);
}

TEST_CASE("floor sets and membership") {
    SECTION("examples") {
        const auto h = RegVarFunction::pure_power(RationalExponent(21, 20));
        CHECK(member(h, 15));
        CHECK_FALSE(member(h, 16));
        CHECK(member(h, 17));
        // exact scan oracle; m <= 30 covers every value below 25
        std::vector<bool> present(25, false);
        for (std::int64_t m = 1; m <= 30; ++m) {
            const auto v = floor_pow(m, h.exponent);
            if (v < 25) present[static_cast<std::size_t>(v)] = true;
        }
        for (std::int64_t n = 1; n < 25; ++n)
            CHECK(member(h, n) == present[static_cast<std::size_t>(n)]);
    }
    SECTION("identity and squares") {
        const auto id = RegVarFunction::pure_power(RationalExponent(1, 1));
        const auto s = floor_set(id, 10);
        CHECK(s.elements == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        const auto sq = RegVarFunction::pure_power(RationalExponent(2, 1));
        CHECK(floor_set(sq, 30).elements == std::vector<std::int64_t>{1, 4, 9, 16, 25});
    }
    SECTION("bitmap agrees with the element list and is strictly increasing") {
        const auto h = RegVarFunction::log_power(RationalExponent(3, 2), 1.0);
        const auto s = floor_set(h, 4000);
        std::int64_t prev = -1;
        std::int64_t count = 0;
        for (const auto e : s.elements) {
            CHECK(e > prev);
            CHECK(s.contains(e));
            prev = e;
            ++count;
        }
        std::int64_t bits = 0;
        for (const auto b : s.bitmap) bits += b;
        CHECK(bits == count);
    }
    SECTION("membership identity from the inverse (condu2 form)") {
        const auto h = RegVarFunction::pure_power(RationalExponent(21, 20));
        const InverseEval phi(h);
        const auto s = floor_set(h, 10000);
        for (std::int64_t n = 2; n < 10000; ++n) {
            // floor(-phi(n)) - floor(-phi(n+1)) with a one-ulp guard band;
            // phi(n) is irrational for n >= 2 up to 21st powers (none here).
            const double a = phi(static_cast<double>(n));
            const double b = phi(static_cast<double>(n + 1));
            REQUIRE(dist_to_int(a) > 1e-9);
            REQUIRE(dist_to_int(b) > 1e-9);
            const std::int64_t ind = static_cast<std::int64_t>(std::floor(-a)) -
                                     static_cast<std::int64_t>(std::floor(-b));
            CHECK(ind == (s.contains(n) ? 1 : 0));
        }
    }
}

TEST_CASE("slow factor theta conditions") {
    const auto h = RegVarFunction::log_power(RationalExponent(3, 2), 2.0);
    double prev = std::abs(h.theta_slow(100.0));
    for (double x : {1e3, 1e5, 1e8, 1e12, 1e100, 1e300}) {
        const double cur = std::abs(h.theta_slow(x));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 3e-3);
    const auto xl = RegVarFunction::x_log_x();
    CHECK(xl.theta_slow(100.0) > 0.0);
    CHECK(xl.theta_slow(1e6) < xl.theta_slow(100.0));
}

TEST_CASE("function spec strings") {
    const auto h = RegVarFunction::parse_spec("pow:c=21/20");
    CHECK(h.exponent == RationalExponent(21, 20));
    CHECK(h.factor == SlowFactor::pure_power);
    const auto g = RegVarFunction::parse_spec("logpow:c=3/2,beta=1,Ch=1");
    CHECK(g.factor == SlowFactor::log_power);
    CHECK(g.beta == 1.0);
    CHECK(RegVarFunction::parse_spec("xlogx").factor == SlowFactor::x_log_x);
    CHECK_THROWS_AS(RegVarFunction::parse_spec("pow:c=21/20,junk=1"), UsageError);
    CHECK_THROWS_AS(RegVarFunction::parse_spec("spiral:c=2"), UsageError);
    CHECK(RegVarFunction::parse_spec(h.spec_string()).spec_string() == h.spec_string());
}

TEST_CASE("domain errors") {
    const auto h = RegVarFunction::log_power(RationalExponent(3, 2), 1.0);
    CHECK_THROWS_AS(h.eval(0.5), UsageError);
    const InverseEval phi(h);
    CHECK_THROWS_AS(phi(0.0), UsageError);
    CHECK_THROWS_AS(h.floor_eval(h.n0 - 1), UsageError);
}

TEST_CASE("floor_set parallel determinism") {
    const auto h = RegVarFunction::pure_power(RationalExponent(21, 20));
    set_thread_count(1);
    const auto s1 = floor_set(h, 50000);
    set_thread_count(2);
    const auto s2 = floor_set(h, 50000);
    set_thread_count(0);
    CHECK(s1.elements == s2.elements);
    CHECK(s1.bitmap == s2.bitmap);
}
