#include <catch2/catch_amalgamated.hpp>

#include "csphere/counting.hpp"
#include "csphere/oracles.hpp"

using namespace csphere;

namespace {

CountTable brute_signed(const RationalExponent& c, std::int64_t lmax) {
    CountTable t;
    t.lmax = lmax;
    t.counts = oracles::brute_table(c, lmax);
    t.method = "brute";
    t.signed_z3 = true;
    return t;
}

}  // namespace

TEST_CASE("ntt prime and root sanity") {
    using namespace ntt;
    CHECK(kMod == 29ULL * (1ULL << 57) + 1);
    CHECK(powmod(kRoot, kMod - 1) == 1);
    CHECK(powmod(kRoot, (kMod - 1) / 2) != 1);
    CHECK(powmod(kRoot, (kMod - 1) / 29) != 1);
}

TEST_CASE("exact convolution matches schoolbook") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::int64_t> a(37), b(53);
        for (auto& x : a) x = static_cast<std::int64_t>(rng() % 1000);
        for (auto& x : b) x = static_cast<std::int64_t>(rng() % 1000);
        std::vector<std::int64_t> ref(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) ref[i + j] += a[i] * b[j];
        CHECK(convolve_exact(a, b) == ref);
        // exact transform route must agree as well
        std::vector<std::uint64_t> ua(a.begin(), a.end()), ub(b.begin(), b.end());
        auto r = ntt::convolve(ua, ub);
        std::vector<std::int64_t> rr(r.begin(), r.end());
        CHECK(rr == ref);
    }
}

TEST_CASE("stars and bars for the identity catalog") {
    const auto id = RegVarFunction::pure_power(RationalExponent(1, 1));
    const auto t = count_positive_range(id, id, id, 64, CountMethod::enumeration);
    for (std::int64_t l = 3; l <= 64; ++l)
        CHECK(t.at(l) == (l - 1) * (l - 2) / 2);
    CHECK(t.at(2) == 0);
}

TEST_CASE("square sanity counts") {
    const auto sq = RegVarFunction::pure_power(RationalExponent(2, 1));
    const auto t = count_positive_range(sq, sq, sq, 100, CountMethod::fft);
    CHECK(t.at(6) == 3);   // permutations of 1+1+4
    CHECK(t.at(3) == 1);   // 1+1+1
    CHECK(t.at(4) == 0);
}

TEST_CASE("method equivalence: enum, fft, brute") {
    const std::int64_t lmax = 400;
    for (const char* spec : {"pow:c=21/20", "pow:c=11/10", "pow:c=3/2", "pow:c=2"}) {
        const auto h = RegVarFunction::parse_spec(spec);
        const auto te = decompose_signs(h, lmax, CountMethod::enumeration);
        const auto tf = decompose_signs(h, lmax, CountMethod::fft);
        const auto tb = brute_signed(h.exponent, lmax);
        INFO(spec);
        CHECK(te.counts == tf.counts);
        CHECK(te.counts == tb.counts);
    }
}

TEST_CASE("sign decomposition fixtures") {
    const auto sq = RegVarFunction::pure_power(RationalExponent(2, 1));
    const auto t = decompose_signs(sq, 100, CountMethod::enumeration);
    CHECK(t.at(0) == 1);
    CHECK(t.at(4) == 6);    // r_2(4^m) = 6
    CHECK(t.at(16) == 6);
    CHECK(t.at(64) == 6);
    CHECK(t.at(7) == 0);    // 7 = 4^0 (8*0+7)
    CHECK(t.at(3) == 8);    // (+-1,+-1,+-1)
    const auto c = RegVarFunction::parse_spec("pow:c=21/20");
    const auto tc = decompose_signs(c, 50, CountMethod::fft);
    CHECK(tc.at(0) == 1);
}

TEST_CASE("mass conservation against independent ball enumeration") {
    const RationalExponent c(21, 20);
    const auto h = RegVarFunction::pure_power(c);
    const auto t = decompose_signs(h, 300, CountMethod::fft);
    std::int64_t total = 0;
    for (const auto v : t.counts) total += v;
    CHECK(total == oracles::brute_ball_count(c, 300));
}

TEST_CASE("main terms") {
    SECTION("c -> 1 limit form") {
        CHECK(main_term_c(1.0, 10.0) == Catch::Approx(4.0 * 100.0).epsilon(1e-12));
    }
    SECTION("gamma = 1 identity spec") {
        AsymptoticSpec s;
        s.g1 = s.g2 = s.g3 = 1.0;
        s.phi1p = s.phi2p = s.phi3p = [](double) { return 1.0; };
        CHECK(s.main(20.0) == Catch::Approx(200.0).epsilon(1e-12));  // lambda^2/2
    }
    SECTION("c = 21/20 against the high-precision Gamma oracle") {
        const double c = 21.0 / 20.0, g = 20.0 / 21.0;
        const double expect = 8.0 * std::pow(oracles::gamma_hp(1.0 + g), 3) /
                              oracles::gamma_hp(3.0 * g) * std::pow(1e5, 3.0 * g - 1.0);
        CHECK(main_term_c(c, 1e5) == Catch::Approx(expect).epsilon(1e-11));
    }
    SECTION("beta constant vs numerical Beta integral") {
        // B(g1,g2) via the singularity-removing substitution x = u^(1/g) on
        // both endpoint halves, midpoint rule on the smooth transformed parts
        const double g1 = 20.0 / 21.0, g2 = 10.0 / 11.0;
        const auto half = [](double ga, double gb) {
            // int_0^(1/2) x^(ga-1) (1-x)^(gb-1) dx with x = u^(1/ga)
            const double ulim = std::pow(0.5, ga);
            const int n = 20000;
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double u = ulim * (i + 0.5) / n;
                s += std::pow(1.0 - std::pow(u, 1.0 / ga), gb - 1.0);
            }
            return s * ulim / n / ga;
        };
        const double quad = half(g1, g2) + half(g2, g1);
        const double closed =
            std::tgamma(g1) * std::tgamma(g2) / std::tgamma(g1 + g2);
        CHECK(closed == Catch::Approx(quad).margin(1e-8));
    }
}

TEST_CASE("J sums") {
    const auto id = RegVarFunction::pure_power(RationalExponent(1, 1));
    const InverseEval phi(id);
    SECTION("identity catalog closed forms") {
        for (std::int64_t l : {10, 100, 1000}) {
            CHECK(j2(phi, phi, l) == Catch::Approx(static_cast<double>(l - 1)));
            CHECK(j3(phi, phi, phi, l) ==
                  Catch::Approx(static_cast<double>((l - 1) * (l - 2)) / 2.0).epsilon(1e-9));
            CHECK(j3_direct(phi, phi, phi, l) ==
                  Catch::Approx(static_cast<double>((l - 1) * (l - 2)) / 2.0));
        }
    }
    SECTION("symmetry") {
        const InverseEval p1(RegVarFunction::pure_power(RationalExponent(21, 20)));
        const InverseEval p2(RegVarFunction::pure_power(RationalExponent(11, 10)));
        CHECK(j2(p1, p2, 4096) == Catch::Approx(j2(p2, p1, 4096)).epsilon(1e-12));
    }
    SECTION("fft j3 equals direct j3") {
        const InverseEval p(RegVarFunction::pure_power(RationalExponent(21, 20)));
        CHECK(j3(p, p, p, 2048) == Catch::Approx(j3_direct(p, p, p, 2048)).epsilon(1e-9));
    }
    SECTION("domain guards") {
        CHECK_THROWS_AS(j2(phi, phi, 1), UsageError);
        CHECK_THROWS_AS(j3(phi, phi, phi, 2), UsageError);
    }
}

TEST_CASE("asymptotic report and first full radius") {
    SECTION("identity: every lambda >= 0 represented") {
        const auto id = RegVarFunction::pure_power(RationalExponent(1, 1));
        const auto t = decompose_signs(id, 200, CountMethod::enumeration);
        CHECK(first_full_radius(t) == 0);
    }
    SECTION("squares have gaps") {
        const auto sq = RegVarFunction::pure_power(RationalExponent(2, 1));
        const auto t = decompose_signs(sq, 100, CountMethod::enumeration);
        std::int64_t largest_gap = -1;
        for (std::int64_t l = 0; l <= 100; ++l)
            if (t.counts[static_cast<std::size_t>(l)] == 0) largest_gap = l;
        CHECK(largest_gap >= 0);
        CHECK(first_full_radius(t) == largest_gap + 1);
    }
    SECTION("identity ratio converges to 1") {
        const auto id = RegVarFunction::pure_power(RationalExponent(1, 1));
        const auto t = decompose_signs(id, 4096, CountMethod::fft);
        const auto rep = asymptotic_report(t, 1.0);
        CHECK(rep.windows.back().deviation < 0.01);
        CHECK(rep.cumulative_rel_err < 0.01);
    }
}

TEST_CASE("asymptotic hypothesis check") {
    const double g = 20.0 / 21.0;
    CHECK(asym_condition(g, g, g));
    CHECK_FALSE(asym_condition(0.75, 0.75, 0.75));
    // boundary of the equal-exponent case: 9(1-g) < 1 iff c < 9/8
    CHECK(asym_condition(8.0 / 9.0 + 1e-6, 8.0 / 9.0 + 1e-6, 8.0 / 9.0 + 1e-6));
}

TEST_CASE("count tables are deterministic across thread counts") {
    const auto h = RegVarFunction::parse_spec("pow:c=21/20");
    set_thread_count(1);
    const auto t1 = decompose_signs(h, 600, CountMethod::enumeration);
    set_thread_count(2);
    const auto t2 = decompose_signs(h, 600, CountMethod::enumeration);
    set_thread_count(0);
    CHECK(t1.counts == t2.counts);
}
