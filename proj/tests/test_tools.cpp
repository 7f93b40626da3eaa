#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "csphere/manifest.hpp"
#include "csphere/sha256.hpp"
#include "csphere/util.hpp"

using namespace csphere;

TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex(std::string(1000, 'x')) == sha256_hex(std::string(1000, 'x')));
    CHECK(sha256_hex("a") != sha256_hex("b"));
}

TEST_CASE("manifest round trip") {
    RunManifest m;
    m.subcommand = "count";
    m.argv = {"count", "--c", "21/20", "--lmax", "100"};
    m.params = {{"c", "21/20"}, {"lmax", 100}};
    m.wall_ms = 12.5;
    const std::string path = "/tmp/csphere_manifest_test.json";
    m.save(path);
    const auto back = RunManifest::load(path);
    CHECK(back.subcommand == m.subcommand);
    CHECK(back.argv == m.argv);
    CHECK(back.params["lmax"] == 100);
    std::remove(path.c_str());
}

TEST_CASE("csv formatting") {
    const std::string path = "/tmp/csphere_csv_test.csv";
    {
        CsvFile csv(path);
        csv.metadata({{"c", "21/20"}});
        csv.header("a,b");
        csv.field(std::int64_t(3)).field(0.1);
        csv.endrow();
        csv.close();
    }
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# {", 0) == 0);
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "3,0.10000000000000001");  // 17 significant digits round-trip
    std::remove(path.c_str());
}

TEST_CASE("pairwise sums are thread-count independent") {
    std::vector<double> xs(100000);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : xs) x = u(rng);
    const double direct =
        pairwise_sum_fn<double>(0, 100000, [&](std::int64_t i) { return xs[static_cast<std::size_t>(i)]; });
    set_thread_count(1);
    const double a = parallel_reduce<double>(
        0, 100000, 0.0,
        [&](std::int64_t lo, std::int64_t hi) {
            double s = 0;
            for (auto i = lo; i < hi; ++i) s += xs[static_cast<std::size_t>(i)];
            return s;
        },
        [](double x, double y) { return x + y; });
    set_thread_count(2);
    const double b = parallel_reduce<double>(
        0, 100000, 0.0,
        [&](std::int64_t lo, std::int64_t hi) {
            double s = 0;
            for (auto i = lo; i < hi; ++i) s += xs[static_cast<std::size_t>(i)];
            return s;
        },
        [](double x, double y) { return x + y; });
    set_thread_count(0);
    CHECK(a == b);  // bitwise
    CHECK(std::abs(a - direct) < 1e-9);
}

TEST_CASE("fit and rng helpers") {
    std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    const auto f = linear_fit(x, y);
    CHECK(f.slope == Catch::Approx(2.0));
    CHECK(f.intercept == Catch::Approx(1.0));
    auto r1 = make_rng(42), r2 = make_rng(42);
    CHECK(random_unit_vector(r1) == random_unit_vector(r2));
}
