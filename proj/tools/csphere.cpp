// Batch front end for the arithmetic c-sphere laboratory: every module is
// reachable through a subcommand, runs are reproducible (seeded, manifest
// next to each output), outputs are CSV with a JSON metadata header line.
//
// Exit codes: 0 success, 1 usage error, 2 computation error, 3 assertion
// failure in --check mode.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "csphere/csphere.hpp"

using namespace csphere;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry subcommands accept c as "p/q" or a float; counting subcommands
// parse rationals only (the exact/approximate boundary stays visible)
double parse_c_float(const std::string& s) {
    if (s.find('/') != std::string::npos) return RationalExponent::parse(s).value();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw UsageError("trailing characters in c '" + s + "'");
        if (!(v > 0.0)) throw UsageError("c must be positive");
        return v;
    } catch (const std::invalid_argument&) {
        throw UsageError("cannot parse c '" + s + "'");
    }
}

std::array<double, 3> parse_vec3(const std::string& s) {
    std::array<double, 3> v{};
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v[0], &v[1], &v[2]) != 3)
        throw UsageError("cannot parse vector '" + s + "' (want x,y,z)");
    return v;
}

std::array<std::int64_t, 3> parse_ivec3(const std::string& s) {
    long long a, b, c;
    if (std::sscanf(s.c_str(), "%lld,%lld,%lld", &a, &b, &c) != 3)
        throw UsageError("cannot parse integer vector '" + s + "' (want i,j,k)");
    return {a, b, c};
}

std::array<double, 3> unit_vec(std::array<double, 3> v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n == 0.0) throw UsageError("direction must be nonzero");
    return {v[0] / n, v[1] / n, v[2] / n};
}

std::vector<std::int64_t> dyadic_range(const std::string& s) {
    int lo, hi;
    if (std::sscanf(s.c_str(), "%d:%d", &lo, &hi) != 2 || lo < 0 || hi < lo)
        throw UsageError("cannot parse dyadic range '" + s + "' (want lo:hi powers of 2)");
    std::vector<std::int64_t> out;
    for (int k = lo; k <= hi; ++k) out.push_back(std::int64_t(1) << k);
    return out;
}

std::vector<std::int64_t> int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stoll(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

// manifest helper shared by the subcommands
struct RunContext {
    RunManifest manifest;
    WallClock clock;
    std::string manifest_path;

    void add_output(const std::string& path) {
        manifest.outputs.emplace_back(path, sha256_file(path));
    }
    void finish() {
        manifest.wall_ms = clock.ms();
        if (!manifest_path.empty()) manifest.save(manifest_path);
    }
};

void run_check_suite(const std::string& name) {
    const auto results = checks::run_checks(name);
    bool all = true;
    for (const auto& r : results) {
        std::printf("check %-55s %s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.detail.c_str());
        all = all && r.pass;
    }
    if (!all) throw CheckFailure("module checks failed for '" + name + "'");
}

bool legendre_gap(std::int64_t lambda) {  // lambda = 4^m (8n + 7)?
    while (lambda % 4 == 0) lambda /= 4;
    return lambda % 8 == 7;
}

int run_cli(const std::vector<std::string>& args);

// ---------------------------------------------------------------- count ----
void cmd_count(const std::string& c_str, const std::vector<std::string>& h_specs,
               std::int64_t lmax, const std::string& method_str, bool positive,
               bool admit_small, bool check_legendre, const std::string& out,
               RunContext& ctx) {
    const CountMethod method =
        method_str == "enum" ? CountMethod::enumeration : CountMethod::fft;
    if (method_str != "enum" && method_str != "fft")
        throw UsageError("--method must be enum or fft");
    if (lmax < 1) throw UsageError("--lmax too small");

    const bool any_h = std::any_of(h_specs.begin(), h_specs.end(),
                                   [](const std::string& s) { return !s.empty(); });
    CountTable table;
    std::string label;
    if (any_h || positive) {
        std::vector<RegVarFunction> hs;
        if (!any_h) {
            if (c_str.empty()) throw UsageError("--c or --h1/--h2/--h3 required");
            for (int k = 0; k < 3; ++k)
                hs.push_back(RegVarFunction::pure_power(RationalExponent::parse(c_str)));
        } else if (std::all_of(h_specs.begin(), h_specs.end(),
                               [](const std::string& s) { return !s.empty(); })) {
            for (const auto& s : h_specs) hs.push_back(RegVarFunction::parse_spec(s));
        } else {
            throw UsageError("give all three of --h1 --h2 --h3");
        }
        table = count_positive_range(hs[0], hs[1], hs[2], lmax, method, admit_small);
        const auto spec = make_asymptotic_spec(hs[0], hs[1], hs[2]);
        double main_from = 1.0;  // phi_k'(lambda) needs lambda >= h_k(x0)
        for (const auto& h : hs) main_from = std::max(main_from, h.eval(h.x0));
        if (!out.empty()) {
            CsvFile csv(out);
            nlohmann::json meta;
            meta["functions"] = table.function_specs;
            meta["n0"] = table.n0s;
            meta["method"] = table.method;
            meta["used_ntt"] = table.used_ntt;
            meta["lmax"] = lmax;
            meta["positive_triples"] = true;
            meta["admit_small"] = admit_small;
            csv.metadata(meta);
            csv.header("lambda,count,main_term,ratio");
            for (std::int64_t l = 0; l <= lmax; ++l) {
                const double main = static_cast<double>(l) >= main_from
                                        ? spec.main(static_cast<double>(l))
                                        : 0.0;
                csv.field(l)
                    .field(table.at(l))
                    .field(main)
                    .field(main > 0 ? static_cast<double>(table.at(l)) / main : 0.0);
                csv.endrow();
            }
            csv.close();
            ctx.add_output(out);
        }
        label = "positive";
    } else {
        if (c_str.empty()) throw UsageError("--c required");
        const RationalExponent c = RationalExponent::parse(c_str);
        const auto h = RegVarFunction::pure_power(c);
        table = decompose_signs(h, lmax, method);
        if (!out.empty()) {
            CsvFile csv(out);
            nlohmann::json meta;
            meta["c"] = c.str();
            meta["method"] = table.method;
            meta["used_ntt"] = table.used_ntt;
            meta["n0"] = table.n0s;
            meta["lmax"] = lmax;
            meta["signed_z3"] = true;
            csv.metadata(meta);
            csv.header("lambda,count,main_term,ratio");
            for (std::int64_t l = 0; l <= lmax; ++l) {
                const double main = l >= 1 ? main_term_c(c.value(), static_cast<double>(l)) : 0.0;
                csv.field(l)
                    .field(table.at(l))
                    .field(main)
                    .field(main > 0 ? static_cast<double>(table.at(l)) / main : 0.0);
                csv.endrow();
            }
            csv.close();
            ctx.add_output(out);
        }
        if (check_legendre) {
            if (!c.is_two()) throw UsageError("--check-legendre requires --c 2");
            for (std::int64_t l = 0; l <= lmax; ++l) {
                const bool gap = l > 0 && legendre_gap(l);
                if (gap != (table.at(l) == 0))
                    throw CheckFailure("Legendre criterion mismatch at lambda = " +
                                       std::to_string(l));
            }
            std::printf("legendre gaps verified exactly up to %lld\n",
                        static_cast<long long>(lmax));
        }
        label = "z3";
    }
    ctx.manifest.params = {{"c", c_str},       {"lmax", lmax},     {"method", method_str},
                           {"table", label},   {"h", h_specs},     {"used_ntt", table.used_ntt}};
    std::printf("count %s lmax=%lld method=%s%s first_full_radius=%lld%s\n", label.c_str(),
                static_cast<long long>(lmax), table.method.c_str(),
                table.used_ntt ? "(ntt)" : "",
                static_cast<long long>(first_full_radius(table)),
                out.empty() ? "" : (" -> " + out).c_str());
}

// ---------------------------------------------------------------- asym -----
void cmd_asym(const std::string& c_str, std::int64_t lmax, const std::string& out,
              RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const auto h = RegVarFunction::pure_power(c);
    const auto table = decompose_signs(h, lmax, CountMethod::fft);
    const auto rep = asymptotic_report(table, c.value());
    const double g = c.gamma_value();
    const bool cond = asym_condition(g, g, g);
    if (!out.empty()) {
        CsvFile csv(out);
        nlohmann::json meta;
        meta["c"] = c.str();
        meta["lmax"] = lmax;
        meta["cumulative_count"] = rep.cumulative_count;
        meta["cumulative_volume"] = rep.cumulative_volume;
        meta["cumulative_rel_err"] = rep.cumulative_rel_err;
        meta["first_full_radius"] = rep.lambda_c_lower_bound;
        meta["asym_condition_39"] = cond;
        csv.metadata(meta);
        csv.header("window_lo,window_hi,mean_ratio,deviation");
        for (const auto& w : rep.windows) {
            csv.field(w.lo).field(w.hi).field(w.mean_ratio).field(w.deviation);
            csv.endrow();
        }
        csv.close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c.str()}, {"lmax", lmax}};
    std::printf(
        "asym c=%s lmax=%lld cum_rel_err=%.4g lambda_c_lb=%lld cond(3.9)=%s top_dev=%.4g\n",
        c.str().c_str(), static_cast<long long>(lmax), rep.cumulative_rel_err,
        static_cast<long long>(rep.lambda_c_lower_bound), cond ? "yes" : "no",
        rep.windows.back().deviation);
}

// ---------------------------------------------------------------- jfun -----
void cmd_jfun(const std::string& h1s, const std::string& h2s, const std::string& h3s,
              const std::string& dyadic, std::int64_t lambda, const std::string& out,
              RunContext& ctx) {
    const InverseEval p1(RegVarFunction::parse_spec(h1s));
    const InverseEval p2(RegVarFunction::parse_spec(h2s));
    std::optional<InverseEval> p3;
    if (!h3s.empty()) p3.emplace(RegVarFunction::parse_spec(h3s));
    std::vector<std::int64_t> ls;
    if (!dyadic.empty())
        ls = dyadic_range(dyadic);
    else if (lambda > 0)
        ls = {lambda};
    else
        throw UsageError("give --lambda or --dyadic");

    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"h1", h1s}, {"h2", h2s}, {"h3", h3s}});
        csv->header("lambda,j,main,ratio");
    }
    double last_ratio = 0.0;
    for (const auto l : ls) {
        double v, main;
        if (p3) {
            v = j3(p1, p2, *p3, l);
            AsymptoticSpec spec;
            spec.g1 = p1.h.gamma_value();
            spec.g2 = p2.h.gamma_value();
            spec.g3 = p3->h.gamma_value();
            spec.phi1p = [&](double y) { return p1.deriv(y, 1); };
            spec.phi2p = [&](double y) { return p2.deriv(y, 1); };
            spec.phi3p = [&](double y) { return p3->deriv(y, 1); };
            main = spec.main(static_cast<double>(l));
        } else {
            v = j2(p1, p2, l);
            const double g1 = p1.h.gamma_value(), g2 = p2.h.gamma_value();
            main = std::tgamma(g1) * std::tgamma(g2) / std::tgamma(g1 + g2) *
                   static_cast<double>(l) * p1.deriv(static_cast<double>(l), 1) *
                   p2.deriv(static_cast<double>(l), 1);
        }
        last_ratio = v / main;
        if (csv) {
            csv->field(l).field(v).field(main).field(last_ratio);
            csv->endrow();
        }
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"h1", h1s}, {"h2", h2s}, {"h3", h3s}, {"dyadic", dyadic}};
    std::printf("jfun %s: last ratio to main term %.6f\n", p3 ? "j3" : "j2", last_ratio);
}

// ---------------------------------------------------------------- expsum ---
void cmd_expsum(const std::string& h_spec, const std::string& dyadic, std::int64_t lambda,
                double chi, std::int64_t grid_factor, double single_t,
                bool have_single_t, const std::string& out, RunContext& ctx) {
    const auto h = RegVarFunction::parse_spec(h_spec);
    if (chi == 0.0) chi = chi_max(h.gamma_value()) - 0.01;
    if (have_single_t) {
        const std::int64_t l = lambda > 0 ? lambda : 4096;
        const InverseEval phi(h);
        const auto f = f_sum(phi, l, single_t);
        const auto g = g_sum(h, l, single_t);
        if (!out.empty()) {
            CsvFile csv(out);
            csv.metadata({{"h", h_spec}, {"lambda", l}, {"t", single_t}});
            csv.header("sum,t,re,im,abs");
            csv.field("F").field(single_t).field(f.real()).field(f.imag()).field(std::abs(f));
            csv.endrow();
            csv.field("G").field(single_t).field(g.real()).field(g.imag()).field(std::abs(g));
            csv.endrow();
            csv.close();
            ctx.add_output(out);
        }
        std::printf("expsum single t=%.6f |F-G|=%.6f\n", single_t, std::abs(f - g));
        ctx.manifest.params = {{"h", h_spec}, {"lambda", l}, {"t", single_t}};
        return;
    }
    std::vector<std::int64_t> ls =
        !dyadic.empty() ? dyadic_range(dyadic)
                        : std::vector<std::int64_t>{lambda > 0 ? lambda : 4096};
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"h", h_spec}, {"chi", chi}, {"grid_factor", grid_factor}});
        csv->header("lambda,sup,argmax_t,bound,fitted_c,lipschitz_slack");
    }
    std::vector<double> lx, ly;
    for (const auto l : ls) {
        const auto gap = fg_gap(h, l, chi, grid_factor);
        if (csv) {
            csv->field(l).field(gap.sup).field(gap.argmax_t).field(gap.bound)
                .field(gap.fitted_c).field(gap.lipschitz_slack);
            csv->endrow();
        }
        lx.push_back(std::log(static_cast<double>(l)));
        ly.push_back(std::log(gap.sup));
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    double slope = 0.0;
    if (lx.size() >= 2) slope = linear_fit(lx, ly).slope;
    ctx.manifest.params = {{"h", h_spec},     {"chi", chi},
                           {"dyadic", dyadic}, {"grid_factor", grid_factor},
                           {"slope", slope},   {"last_sup", std::exp(ly.back())}};
    std::printf("expsum fg-gap: chi=%.4f slope=%.4f (target <= gamma - chi + 0.03 = %.4f)\n",
                chi, slope, h.gamma_value() - chi + 0.03);
}

// ---------------------------------------------------------------- vdc ------
void cmd_vdc(std::int64_t n, int trials, std::uint64_t seed, double c0,
             const std::string& out, RunContext& ctx) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"n", n}, {"trials", trials}, {"seed", seed}, {"c0", c0}});
        csv->header("kind,param,lhs,rhs,pass");
    }
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        const bool quad = t % 2 == 0;
        VdcResult r;
        double param;
        if (quad) {
            const double alpha =
                std::exp(std::log(0.5 / static_cast<double>(n)) * uni(rng));
            param = alpha;
            r = vdc_check([alpha](double x) { return alpha * x * x; },
                          [alpha](double) { return 2.0 * alpha; }, 1.0,
                          static_cast<double>(n), 2.0 * alpha, 1.0, c0);
        } else {
            const double c = 1.0 + 0.9 * uni(rng);
            const double m = 1.0 + std::floor(16.0 * uni(rng));
            const double p = static_cast<double>(n) / 2.0;
            param = m;
            const double eta = m * c * (c - 1.0) * std::pow(2.0 * p, c - 2.0);
            r = vdc_check([m, c](double x) { return m * std::pow(x, c); },
                          [m, c](double x) { return m * c * (c - 1.0) * std::pow(x, c - 2.0); },
                          p, 2.0 * p, eta, std::pow(2.0, 2.0 - c), c0);
        }
        failures += r.pass ? 0 : 1;
        if (csv) {
            csv->field(quad ? "quadratic" : "cpower").field(param).field(r.lhs).field(r.rhs)
                .field(std::int64_t(r.pass ? 1 : 0));
            csv->endrow();
        }
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"n", n}, {"trials", trials}, {"seed", seed}, {"c0", c0}};
    std::printf("vdc: %d/%d passed with C0=%.1f\n", trials - failures, trials, c0);
    if (failures > 0) throw CheckFailure("van der Corput bound failed on some phases");
}

// ---------------------------------------------------------------- surface --
void cmd_surface(const std::string& c_str, int nq, bool do_polar, const std::string& out,
                 RunContext& ctx) {
    const double c = parse_c_float(c_str);
    const auto quad = make_surface_quadrature(c, nq);
    const double m = quad.mass();
    const double closed = surface_mass(c);
    const double dev = std::abs(m - closed) / closed;
    std::printf("surface mass c=%.6f nq=%d quadrature=%.12g closed=%.12g relerr=%.3g\n", c,
                nq, m, closed, dev);
    double polar_rel = 0.0;
    if (do_polar) {
        auto gauss = [](const std::array<double, 3>& x) {
            return std::exp(-M_PI * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
        };
        const auto p = polar_check(gauss, c, 4.0, 48, nq, 64);
        polar_rel = p.relerr;
        std::printf("polar identity (gaussian): lhs=%.10g rhs=%.10g relerr=%.3g\n", p.lhs,
                    p.rhs, p.relerr);
    }
    if (!out.empty()) {
        CsvFile csv(out);
        csv.metadata({{"c", c}, {"nq", nq}});
        csv.header("quantity,value");
        csv.field("mass_quadrature").field(m);
        csv.endrow();
        csv.field("mass_closed_form").field(closed);
        csv.endrow();
        csv.field("mass_relerr").field(dev);
        csv.endrow();
        if (do_polar) {
            csv.field("polar_relerr").field(polar_rel);
            csv.endrow();
        }
        csv.close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c}, {"nq", nq}, {"polar", do_polar}};
}

// ---------------------------------------------------------------- fourier --
void cmd_fourier(const std::string& c_str, const std::string& xi_str,
                 const std::string& shells, int samples, std::uint64_t seed,
                 const std::string& out, RunContext& ctx) {
    const double c = parse_c_float(c_str);
    if (!xi_str.empty()) {
        const auto xi = parse_vec3(xi_str);
        const auto v = fourier_mu(c, xi);
        std::printf("fourier_mu c=%.6f xi=(%g,%g,%g): %.12g\n", c, xi[0], xi[1], xi[2],
                    v.real());
        ctx.manifest.params = {{"c", c}, {"xi", xi_str}};
        return;
    }
    std::vector<double> radii;
    for (const auto r : int_list(shells)) radii.push_back(static_cast<double>(r));
    const auto rows = decay_profile(c, radii, samples, seed);
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"c", c}, {"samples", samples}, {"seed", seed},
                       {"nq_rule", "max(48, ceil(10 R) + 16) per rule piece"}});
        csv->header("R,max_scaled_abs,dir1,dir2,dir3");
    }
    double overall = 0.0, small_r = 0.0;
    for (const auto& row : rows) {
        overall = std::max(overall, row.max_scaled_abs);
        if (row.radius <= 8.0) small_r = std::max(small_r, row.max_scaled_abs);
        if (csv) {
            csv->field(row.radius).field(row.max_scaled_abs)
                .field(row.argmax_direction[0]).field(row.argmax_direction[1])
                .field(row.argmax_direction[2]);
            csv->endrow();
        }
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c}, {"shells", shells}, {"samples", samples}, {"seed", seed}};
    std::printf("fourier decay profile: max |xi||Fmu| = %.6g, calibration (R<=8) = %.6g\n",
                overall, small_r);
}

// ---------------------------------------------------------------- cap ------
void cmd_cap(const std::string& c_str, const std::string& xi_str, double a,
             const std::string& scan, double delta, int nq, const std::string& out,
             RunContext& ctx) {
    const double c = parse_c_float(c_str);
    const auto xi = unit_vec(parse_vec3(xi_str));
    const auto quad = make_surface_quadrature(c, nq);
    std::vector<double> as;
    if (!scan.empty()) {
        double lo, hi;
        int n;
        if (std::sscanf(scan.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2)
            throw UsageError("cannot parse --a-scan (want lo:hi:n)");
        for (int i = 0; i < n; ++i) as.push_back(lo + (hi - lo) * i / (n - 1));
    } else {
        as.push_back(a);
    }
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"c", c}, {"xi", xi_str}, {"nq", nq}, {"delta", delta}});
        csv->header(delta > 0 ? "a,nu,lower,upper" : "a,nu");
    }
    for (const double av : as) {
        const CapSpec cap(xi, av);
        if (delta > 0) {
            const auto s = cap_sandwich(cap, delta, quad);
            if (csv) {
                csv->field(av).field(s.sharp).field(s.lower).field(s.upper);
                csv->endrow();
            } else {
                std::printf("a=%.6f nu=%.8f in [%.8f, %.8f]\n", av, s.sharp, s.lower, s.upper);
            }
        } else {
            const double v = cap_measure(cap, quad);
            if (csv) {
                csv->field(av).field(v);
                csv->endrow();
            } else {
                std::printf("a=%.6f nu=%.8f\n", av, v);
            }
        }
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
        std::printf("cap scan -> %s\n", out.c_str());
    }
    ctx.manifest.params = {{"c", c}, {"xi", xi_str}, {"a", a},
                           {"scan", scan}, {"delta", delta}, {"nq", nq}};
}

// ---------------------------------------------------------------- project --
void cmd_project(const std::string& c_str, std::int64_t lambda, const std::string& out,
                 RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const auto cloud = project(c, lambda);
    if (cloud.count == 0) std::printf("notice: empty sphere at lambda=%lld\n",
                                      static_cast<long long>(lambda));
    if (!out.empty()) {
        CsvFile csv(out);
        csv.metadata({{"c", c.str()}, {"lambda", lambda}, {"count", cloud.count},
                      {"max_cnorm_defect", cloud.max_cnorm_defect}});
        csv.header("m1,m2,m3,x1,x2,x3");
        for (std::size_t i = 0; i < cloud.lattice.size(); ++i) {
            csv.field(cloud.lattice[i][0]).field(cloud.lattice[i][1]).field(cloud.lattice[i][2])
                .field(cloud.points[i][0]).field(cloud.points[i][1]).field(cloud.points[i][2]);
            csv.endrow();
        }
        csv.close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c.str()}, {"lambda", lambda}};
    std::printf("project c=%s lambda=%lld count=%lld defect=%.3g\n", c.str().c_str(),
                static_cast<long long>(lambda), static_cast<long long>(cloud.count),
                cloud.max_cnorm_defect);
}

// ---------------------------------------------------------------- weyl -----
void cmd_weyl(const std::string& c_str, const std::string& dyadic, std::int64_t lambda,
              const std::string& freq_str, int nq, const std::string& out, RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const auto freq = parse_vec3(freq_str);
    const auto quad = make_surface_quadrature(
        c.value(), std::max(nq, fourier_nq_for(std::sqrt(
                                freq[0] * freq[0] + freq[1] * freq[1] + freq[2] * freq[2]))));
    std::vector<std::int64_t> ls =
        !dyadic.empty() ? dyadic_range(dyadic) : std::vector<std::int64_t>{lambda};
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"c", c.str()}, {"freq", freq_str}});
        csv->header("lambda,re_value,im_value,re_limit,gap");
    }
    double last_gap = 0.0;
    for (const auto l : ls) {
        const SphereGeometry geo(c, l);
        const auto w = weyl_trig(geo, freq, quad);
        last_gap = w.gap;
        if (csv) {
            csv->field(l).field(w.value.real()).field(w.value.imag())
                .field(w.limit.real()).field(w.gap);
            csv->endrow();
        }
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c.str()}, {"freq", freq_str}, {"dyadic", dyadic},
                           {"lambda", lambda}};
    std::printf("weyl gap at last lambda: %.6g\n", last_gap);
}

// ---------------------------------------------------------------- disc -----
void cmd_disc(const std::string& c_str, std::int64_t lambda, const std::string& xi_str,
              const std::string& pows, int dirs, std::uint64_t seed,
              const std::string& dirs_file, std::int64_t nbins, int nq, bool exact,
              const std::string& out, RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const auto quad = make_surface_quadrature(c.value(), nq);
    if (!xi_str.empty()) {
        const auto xi = unit_vec(parse_vec3(xi_str));
        DiscrepancyResult res;
        if (exact) {
            res = discrepancy_exact(project(c, lambda), xi, quad);
        } else {
            const SphereGeometry geo(c, lambda);
            res = discrepancy_binned(geo, {xi}, quad, nbins)[0];
        }
        if (!out.empty()) {
            CsvFile csv(out);
            csv.metadata({{"c", c.str()}, {"lambda", lambda}, {"mode", exact ? "exact" : "binned"}});
            csv.header("lambda,xi1,xi2,xi3,D,argmax_a,normalized");
            csv.field(lambda).field(xi[0]).field(xi[1]).field(xi[2]).field(res.d)
                .field(res.argmax_a).field(res.normalized);
            csv.endrow();
            csv.close();
            ctx.add_output(out);
        }
        ctx.manifest.params = {{"c", c.str()}, {"lambda", lambda}, {"xi", xi_str},
                               {"exact", exact}, {"nbins", nbins}, {"nq", nq}};
        std::printf("disc lambda=%lld D=%.6g argmax_a=%.6f normalized=%.6g (count %lld)\n",
                    static_cast<long long>(lambda), res.d, res.argmax_a, res.normalized,
                    static_cast<long long>(res.count));
        return;
    }
    if (pows.empty()) throw UsageError("give --xi with --lambda, or --pows for a decay run");
    auto lambdas = dyadic_range(pows);
    DiscrepancyDecayReport rep;
    if (!dirs_file.empty()) {
        std::ifstream in(dirs_file);
        if (!in) throw UsageError("cannot open directions file " + dirs_file);
        std::vector<std::array<double, 3>> dlist;
        double x, y, z;
        while (in >> x >> y >> z) dlist.push_back(unit_vec({x, y, z}));
        if (dlist.empty()) throw UsageError("directions file is empty");
        rep = discrepancy_decay_dirs(c, lambdas, dlist, nq, nbins);
    } else {
        rep = discrepancy_decay(c, lambdas, dirs, seed, nq, nbins);
    }
    if (!out.empty()) {
        CsvFile csv(out);
        csv.metadata({{"c", c.str()},
                      {"dirs", static_cast<int>(rep.directions.size())},
                      {"seed", seed},
                      {"nbins", nbins},
                      {"nq", nq},
                      {"slope_normalized", rep.slope_normalized},
                      {"slope_vs_main", rep.slope_vs_main},
                      {"theory_exponent", rep.theory_exponent}});
        csv.header("lambda,xi1,xi2,xi3,D,argmax_a,normalized");
        for (std::size_t i = 0; i < rep.points.size(); ++i)
            for (std::size_t d = 0; d < rep.directions.size(); ++d) {
                const auto& r = rep.per_direction[i][d];
                csv.field(rep.points[i].lambda)
                    .field(rep.directions[d][0]).field(rep.directions[d][1])
                    .field(rep.directions[d][2]).field(r.d).field(r.argmax_a)
                    .field(r.normalized);
                csv.endrow();
            }
        csv.close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c.str()},       {"pows", pows},
                           {"dirs", dirs},       {"seed", seed},
                           {"nbins", nbins},     {"nq", nq},
                           {"slope_normalized", rep.slope_normalized},
                           {"slope_vs_main", rep.slope_vs_main}};
    std::printf("disc decay: slope(mean D/r)=%.4f slope(vs main)=%.4f reference exponent %.4f\n",
                rep.slope_normalized, rep.slope_vs_main, rep.theory_exponent);
}

// ---------------------------------------------------------------- kernels --
void cmd_kernels(const std::string& c_str, std::int64_t lambda, int samples,
                 std::uint64_t seed, const std::string& dump, std::int64_t radius,
                 const std::string& out, RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const KernelField field(c, lambda);
    const double defect = field.partition_defect_max();
    const double dom = field.domination_constant();
    const double shell = field.sigma_shell_constant();
    const double mass = field.mass();
    const double omega_ratio = field.omega_ratio_max(samples, seed);
    std::printf("kernels lambda=%lld: partition_defect=%.3g domination_sup=%.3g "
                "shell_constant=%.3g mass=%.4f omega_ratio=%.3f\n",
                static_cast<long long>(lambda), defect, dom, shell, mass, omega_ratio);
    if (!dump.empty()) {
        if (out.empty()) throw UsageError("--dump needs --out for the binary field");
        KernelId id;
        if (dump == "sigma") id = KernelId::sigma;
        else if (dump == "major") id = KernelId::sigma_major;
        else if (dump == "minor") id = KernelId::sigma_minor;
        else if (dump == "omega") id = KernelId::omega;
        else if (dump == "k") id = KernelId::kernel_k;
        else throw UsageError("--dump must be sigma|major|minor|omega|k");
        dump_kernel_field(field, id, radius, out);
        ctx.add_output(out);
        std::printf("dumped %s field (radius %lld) -> %s\n", dump.c_str(),
                    static_cast<long long>(radius), out.c_str());
    } else if (!out.empty()) {
        CsvFile csv(out);
        csv.metadata({{"c", c.str()}, {"lambda", lambda}, {"samples", samples},
                      {"seed", seed}});
        csv.header("quantity,value");
        csv.field("partition_defect_max").field(defect);
        csv.endrow();
        csv.field("domination_sup").field(dom);
        csv.endrow();
        csv.field("sigma_shell_constant").field(shell);
        csv.endrow();
        csv.field("mass").field(mass);
        csv.endrow();
        csv.field("omega_ratio_max").field(omega_ratio);
        csv.endrow();
        csv.close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c.str()}, {"lambda", lambda}, {"samples", samples},
                           {"seed", seed}, {"dump", dump}, {"radius", radius}};
}

// ---------------------------------------------------------------- average --
void cmd_average(const std::string& c_str, std::int64_t lambda, bool continuous, double t,
                 const std::string& x_str, int nq, RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    if (continuous) {
        const auto quad = make_surface_quadrature(c.value(), nq);
        const auto x = x_str.empty() ? std::array<double, 3>{0, 0, 0} : parse_vec3(x_str);
        const double v = continuous_average(
            [](const std::array<double, 3>& p) {
                return std::exp(-M_PI * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
            },
            x, t, quad);
        std::printf("continuous average (gaussian) at t=%.4f: %.10g\n", t, v);
        ctx.manifest.params = {{"c", c.str()}, {"t", t}, {"x", x_str}, {"nq", nq}};
        return;
    }
    SparseFn delta;
    delta[{0, 0, 0}] = 1.0;
    const auto avg = discrete_average(delta, c, lambda);
    double l1 = 0.0, sup = 0.0;
    for (const auto& [k, v] : avg) {
        l1 += std::abs(v);
        sup = std::max(sup, std::abs(v));
    }
    ctx.manifest.params = {{"c", c.str()}, {"lambda", lambda}};
    std::printf("discrete average of delta: support=%zu l1=%.9f sup=%.3g (1/r=%.3g)\n",
                avg.size(), l1, sup, 1.0 / static_cast<double>(avg.size()));
}

// ---------------------------------------------------------------- ergodic --
void cmd_ergodic(const std::string& c_str, const std::string& theta_str,
                 const std::string& m_str, const std::string& dyadic, std::int64_t lambda,
                 const std::string& out, RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const auto theta = parse_vec3(theta_str);
    const auto m = parse_ivec3(m_str);
    std::vector<std::int64_t> ls =
        !dyadic.empty() ? dyadic_range(dyadic) : std::vector<std::int64_t>{lambda};
    const auto rows = torus_ergodic_run(theta, m, ls, c);
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"c", c.str()}, {"theta", theta_str}, {"m", m_str}});
        csv->header("lambda,count,re,im,abs,empty");
    }
    for (const auto& r : rows) {
        if (r.empty)
            std::printf("notice: empty sphere at lambda=%lld (skipped)\n",
                        static_cast<long long>(r.lambda));
        if (csv) {
            csv->field(r.lambda).field(r.count).field(r.multiplier.real())
                .field(r.multiplier.imag()).field(std::abs(r.multiplier))
                .field(std::int64_t(r.empty ? 1 : 0));
            csv->endrow();
        }
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    ctx.manifest.params = {{"c", c.str()}, {"theta", theta_str}, {"m", m_str},
                           {"dyadic", dyadic}, {"lambda", lambda}};
    if (!rows.empty() && !rows.back().empty)
        std::printf("ergodic multiplier at lambda=%lld: |A| = %.6g\n",
                    static_cast<long long>(rows.back().lambda),
                    std::abs(rows.back().multiplier));
}

// ---------------------------------------------------------------- variation -
void cmd_variation(double r, const std::string& file, int random_n, std::uint64_t seed,
                   RunContext& ctx) {
    std::vector<double> seq;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw UsageError("cannot open sequence file " + file);
        double v;
        while (in >> v) seq.push_back(v);
    } else {
        auto rng = make_rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        seq.resize(static_cast<std::size_t>(random_n));
        for (auto& v : seq) v = u(rng);
    }
    const auto res = variation_seminorm(seq, r);
    ctx.manifest.params = {{"r", r}, {"file", file}, {"random_n", random_n}, {"seed", seed}};
    std::printf("V^%.3f over %zu terms: %.10g%s\n", r, seq.size(), res.value,
                res.exact ? "" : " (thinned, lower bound)");
}

// ---------------------------------------------------------------- minor ----
void cmd_minor(const std::string& c_str, const std::string& n_list_str,
               const std::string& out, RunContext& ctx) {
    const RationalExponent c = RationalExponent::parse(c_str);
    const auto rows = minor_arc_profile(c, int_list(n_list_str));
    std::optional<CsvFile> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->metadata({{"c", c.str()}, {"n_list", n_list_str}});
        csv->header("N,argmax_lambda,value_upper,value_core,bound,fitted_c,skipped_empty");
    }
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        if (csv) {
            csv->field(r.n).field(r.argmax_lambda).field(r.value_upper).field(r.value_core)
                .field(r.bound).field(r.fitted_c).field(r.skipped_empty);
            csv->endrow();
        }
        lx.push_back(std::log(static_cast<double>(r.n)));
        ly.push_back(std::log(r.value_upper));
    }
    if (csv) {
        csv->close();
        ctx.add_output(out);
    }
    double slope = lx.size() >= 2 ? linear_fit(lx, ly).slope : 0.0;
    const double cv = c.value();
    ctx.manifest.params = {{"c", c.str()}, {"n_list", n_list_str}};
    std::printf("minor profile slope=%.4f (reference exponent %.4f)\n", slope,
                -(11.0 - 10.0 * cv) / (6.0 * cv));
}

// ---------------------------------------------------------------- driver ---
int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"arithmetic c-sphere laboratory"};
    app.require_subcommand(0, 1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware, or CSPHERE_THREADS)");
    std::string replay_path;
    app.add_option("--replay", replay_path, "re-run a manifest and compare output digests");

    struct Common {
        std::string out;
        std::string manifest;
        bool check = false;
    };
    auto add_common = [](CLI::App* cmd, Common& c) {
        cmd->add_option("--out", c.out, "output CSV path");
        cmd->add_option("--manifest", c.manifest, "manifest path (default: <out>.manifest.json)");
        cmd->add_flag("--check", c.check, "run the module invariant suite");
    };

    // count
    auto* count = app.add_subcommand("count", "exact representation counts");
    Common count_c;
    std::string count_cstr, count_method = "fft";
    std::vector<std::string> count_h;
    std::int64_t count_lmax = 0;
    bool count_positive = false, count_legendre = false, count_admit = false;
    count->add_option("--c", count_cstr, "exponent c as p/q (or integer)");
    count_h.resize(3);
    count->add_option("--h1", count_h[0], "function spec for coordinate 1 (generalized spheres)");
    count->add_option("--h2", count_h[1], "function spec for coordinate 2");
    count->add_option("--h3", count_h[2], "function spec for coordinate 3");
    count->add_option("--lmax", count_lmax, "horizon")->required();
    count->add_option("--method", count_method, "enum|fft");
    count->add_flag("--positive", count_positive, "positive-coordinate triples only");
    count->add_flag("--admit-small", count_admit,
                    "re-admit floor values below N0 (variant count)");
    count->add_flag("--check-legendre", count_legendre, "verify the 4^m(8n+7) gaps (c=2)");
    add_common(count, count_c);

    // asym
    auto* asym = app.add_subcommand("asym", "asymptotic ratio report");
    Common asym_c;
    std::string asym_cstr;
    std::int64_t asym_lmax = 0;
    asym->add_option("--c", asym_cstr)->required();
    asym->add_option("--lmax", asym_lmax)->required();
    add_common(asym, asym_c);

    // jfun
    auto* jfun = app.add_subcommand("jfun", "J-sum evaluators");
    Common jfun_c;
    std::string j_h1, j_h2, j_h3, j_dyadic;
    std::int64_t j_lambda = 0;
    jfun->add_option("--h1", j_h1)->required();
    jfun->add_option("--h2", j_h2)->required();
    jfun->add_option("--h3", j_h3);
    jfun->add_option("--lambda", j_lambda);
    jfun->add_option("--dyadic", j_dyadic, "lo:hi powers of two");
    add_common(jfun, jfun_c);

    // expsum
    auto* expsum = app.add_subcommand("expsum", "F/G exponential sums and the gap ladder");
    Common exp_c;
    std::string e_h = "pow:c=21/20", e_dyadic;
    std::int64_t e_lambda = 0, e_grid = 8;
    double e_chi = 0.0, e_t = 0.0;
    bool e_have_t = false;
    expsum->add_option("--fn", e_h, "function spec");
    expsum->add_option("--lambda", e_lambda);
    expsum->add_option("--dyadic", e_dyadic);
    expsum->add_option("--chi", e_chi);
    expsum->add_option("--grid-factor", e_grid);
    expsum->add_option("--t", e_t)->each([&](const std::string&) { e_have_t = true; });
    add_common(expsum, exp_c);

    // vdc
    auto* vdc = app.add_subcommand("vdc", "van der Corput property test");
    Common vdc_c;
    std::int64_t v_n = 10000;
    int v_trials = 100;
    std::uint64_t v_seed = 1;
    double v_c0 = 10.0;
    vdc->add_option("--n", v_n);
    vdc->add_option("--trials", v_trials);
    vdc->add_option("--seed", v_seed);
    vdc->add_option("--c0", v_c0);
    add_common(vdc, vdc_c);

    // surface
    auto* surface = app.add_subcommand("surface", "surface measure quadrature");
    Common surf_c;
    std::string s_cv;
    int s_nq = 128;
    bool s_polar = false, s_mass = true;
    surface->add_option("--c", s_cv)->required();
    surface->add_option("--nq", s_nq);
    surface->add_flag("--mass", s_mass, "report the surface mass (default)");
    surface->add_flag("--polar", s_polar, "also run the polar identity check");
    add_common(surface, surf_c);

    // fourier
    auto* fourier = app.add_subcommand("fourier", "Fourier transform of mu_c");
    Common four_c;
    std::string f_cv;
    std::string f_xi, f_shells = "2,4,8,16,32,64,128,256";
    int f_samples = 64;
    std::uint64_t f_seed = 1;
    fourier->add_option("--c", f_cv)->required();
    fourier->add_option("--xi", f_xi, "single frequency x,y,z");
    fourier->add_option("--shells", f_shells, "decay profile shell radii");
    fourier->add_option("--samples", f_samples);
    fourier->add_option("--seed", f_seed);
    add_common(fourier, four_c);

    // cap
    auto* cap = app.add_subcommand("cap", "spherical cap measures");
    Common cap_c;
    std::string cap_cv;
    double cap_a = 0.5, cap_delta = 0.0;
    std::string cap_xi = "0,0,1", cap_scan;
    int cap_nq = 128;
    cap->add_option("--c", cap_cv)->required();
    cap->add_option("--xi", cap_xi);
    cap->add_option("--a", cap_a);
    cap->add_option("--a-scan", cap_scan, "lo:hi:n");
    cap->add_option("--delta", cap_delta, "smoothing width for the sandwich");
    cap->add_option("--nq", cap_nq);
    add_common(cap, cap_c);

    // project
    auto* proj = app.add_subcommand("project", "projected sphere clouds");
    Common proj_c;
    std::string p_cstr;
    std::int64_t p_lambda = 0;
    proj->add_option("--c", p_cstr)->required();
    proj->add_option("--lambda", p_lambda)->required();
    add_common(proj, proj_c);

    // weyl
    auto* weyl = app.add_subcommand("weyl", "Weyl sums against test functions");
    Common weyl_c;
    std::string w_cstr, w_dyadic, w_freq = "1,2,3";
    std::int64_t w_lambda = 1000;
    int w_nq = 96;
    weyl->add_option("--c", w_cstr)->required();
    weyl->add_option("--lambda", w_lambda);
    weyl->add_option("--dyadic", w_dyadic);
    weyl->add_option("--freq", w_freq);
    weyl->add_option("--nq", w_nq);
    add_common(weyl, weyl_c);

    // disc
    auto* disc = app.add_subcommand("disc", "cap discrepancy");
    Common disc_c;
    std::string d_cstr, d_xi, d_pows, d_dirs_file;
    std::int64_t d_lambda = 0, d_nbins = 1 << 14;
    int d_dirs = 16, d_nq = 96;
    std::uint64_t d_seed = 1;
    bool d_exact = false;
    disc->add_option("--c", d_cstr)->required();
    disc->add_option("--lambda", d_lambda);
    disc->add_option("--xi", d_xi);
    disc->add_option("--pows", d_pows, "dyadic lambda ladder lo:hi");
    disc->add_option("--dirs", d_dirs);
    disc->add_option("--seed", d_seed);
    disc->add_option("--dirs-file", d_dirs_file, "one unit vector per line");
    disc->add_option("--nbins", d_nbins);
    disc->add_option("--nq", d_nq);
    disc->add_flag("--exact", d_exact, "exact jump-grid mode (moderate lambda)");
    add_common(disc, disc_c);

    // kernels
    auto* kernels = app.add_subcommand("kernels", "circle-method kernel split");
    Common ker_c;
    std::string k_cstr, k_dump;
    std::int64_t k_lambda = 200, k_radius = 16;
    int k_samples = 100000;
    std::uint64_t k_seed = 1;
    kernels->add_option("--c", k_cstr)->required();
    kernels->add_option("--lambda", k_lambda);
    kernels->add_option("--samples", k_samples);
    kernels->add_option("--seed", k_seed);
    kernels->add_option("--dump", k_dump, "sigma|major|minor|omega|k binary field dump");
    kernels->add_option("--radius", k_radius, "dump window |x|_inf bound");
    add_common(kernels, ker_c);

    // average
    auto* average = app.add_subcommand("average", "discrete and continuous averages");
    Common avg_c;
    std::string a_cstr, a_x;
    std::int64_t a_lambda = 30;
    double a_t = 1.0;
    int a_nq = 96;
    bool a_cont = false;
    average->add_option("--c", a_cstr)->required();
    average->add_option("--lambda", a_lambda);
    average->add_flag("--continuous", a_cont);
    average->add_option("--t", a_t);
    average->add_option("--x", a_x);
    average->add_option("--nq", a_nq);
    add_common(average, avg_c);

    // ergodic
    auto* ergodic = app.add_subcommand("ergodic", "torus rotation multipliers");
    Common erg_c;
    std::string g_cstr, g_theta = "0.6180339887498949,0.3819660112501051,0.2360679774997897",
                g_m = "1,1,1", g_dyadic;
    std::int64_t g_lambda = 10000;
    ergodic->add_option("--c", g_cstr)->required();
    ergodic->add_option("--theta", g_theta);
    ergodic->add_option("--m", g_m);
    ergodic->add_option("--lambda", g_lambda);
    ergodic->add_option("--dyadic", g_dyadic);
    add_common(ergodic, erg_c);

    // variation
    auto* variation = app.add_subcommand("variation", "r-variation seminorm");
    Common var_c;
    double var_r = 2.0;
    std::string var_file;
    int var_random = 0;
    std::uint64_t var_seed = 1;
    variation->add_option("--r", var_r)->required();
    variation->add_option("--file", var_file);
    variation->add_option("--random", var_random);
    variation->add_option("--seed", var_seed);
    add_common(variation, var_c);

    // minor
    auto* minor = app.add_subcommand("minor", "minor-arc l2 profile");
    Common min_c;
    std::string m_cstr, m_nlist = "64,128,256";
    minor->add_option("--c", m_cstr)->required();
    minor->add_option("--n-list", m_nlist);
    add_common(minor, min_c);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (threads > 0) set_thread_count(threads);

    if (!replay_path.empty()) {
        const auto m = RunManifest::load(replay_path);
        std::printf("replaying %s: %s\n", replay_path.c_str(), m.subcommand.c_str());
        const int rc = run_cli(m.argv);
        if (rc != 0) return rc;
        for (const auto& [path, digest] : m.outputs) {
            const std::string now = sha256_file(path);
            if (now != digest)
                throw CheckFailure("replay digest mismatch for " + path);
            std::printf("replay digest ok: %s\n", path.c_str());
        }
        return 0;
    }

    auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (!sub) {
        std::cout << app.help();
        return 0;
    }

    RunContext ctx;
    ctx.manifest.subcommand = sub->get_name();
    ctx.manifest.argv = args;

    auto setup_manifest = [&](const Common& c) {
        if (!c.manifest.empty())
            ctx.manifest_path = c.manifest;
        else if (!c.out.empty())
            ctx.manifest_path = c.out + ".manifest.json";
    };

    const std::string name = sub->get_name();
    if (name == "count") {
        setup_manifest(count_c);
        if (count_c.check) run_check_suite("count");
        cmd_count(count_cstr, count_h, count_lmax, count_method, count_positive,
                  count_admit, count_legendre, count_c.out, ctx);
    } else if (name == "asym") {
        setup_manifest(asym_c);
        if (asym_c.check) run_check_suite("asym");
        cmd_asym(asym_cstr, asym_lmax, asym_c.out, ctx);
    } else if (name == "jfun") {
        setup_manifest(jfun_c);
        if (jfun_c.check) run_check_suite("jfun");
        cmd_jfun(j_h1, j_h2, j_h3, j_dyadic, j_lambda, jfun_c.out, ctx);
    } else if (name == "expsum") {
        setup_manifest(exp_c);
        if (exp_c.check) run_check_suite("expsum");
        cmd_expsum(e_h, e_dyadic, e_lambda, e_chi, e_grid, e_t, e_have_t, exp_c.out, ctx);
    } else if (name == "vdc") {
        setup_manifest(vdc_c);
        if (vdc_c.check) run_check_suite("vdc");
        cmd_vdc(v_n, v_trials, v_seed, v_c0, vdc_c.out, ctx);
    } else if (name == "surface") {
        setup_manifest(surf_c);
        if (surf_c.check) run_check_suite("surface");
        cmd_surface(s_cv, s_nq, s_polar, surf_c.out, ctx);
    } else if (name == "fourier") {
        setup_manifest(four_c);
        if (four_c.check) run_check_suite("fourier");
        cmd_fourier(f_cv, f_xi, f_shells, f_samples, f_seed, four_c.out, ctx);
    } else if (name == "cap") {
        setup_manifest(cap_c);
        if (cap_c.check) run_check_suite("cap");
        cmd_cap(cap_cv, cap_xi, cap_a, cap_scan, cap_delta, cap_nq, cap_c.out, ctx);
    } else if (name == "project") {
        setup_manifest(proj_c);
        if (proj_c.check) run_check_suite("project");
        cmd_project(p_cstr, p_lambda, proj_c.out, ctx);
    } else if (name == "weyl") {
        setup_manifest(weyl_c);
        if (weyl_c.check) run_check_suite("weyl");
        cmd_weyl(w_cstr, w_dyadic, w_lambda, w_freq, w_nq, weyl_c.out, ctx);
    } else if (name == "disc") {
        setup_manifest(disc_c);
        if (disc_c.check) run_check_suite("disc");
        cmd_disc(d_cstr, d_lambda, d_xi, d_pows, d_dirs, d_seed, d_dirs_file, d_nbins, d_nq,
                 d_exact, disc_c.out, ctx);
    } else if (name == "kernels") {
        setup_manifest(ker_c);
        if (ker_c.check) run_check_suite("kernels");
        cmd_kernels(k_cstr, k_lambda, k_samples, k_seed, k_dump, k_radius, ker_c.out, ctx);
    } else if (name == "average") {
        setup_manifest(avg_c);
        if (avg_c.check) run_check_suite("average");
        cmd_average(a_cstr, a_lambda, a_cont, a_t, a_x, a_nq, ctx);
    } else if (name == "ergodic") {
        setup_manifest(erg_c);
        if (erg_c.check) run_check_suite("ergodic");
        cmd_ergodic(g_cstr, g_theta, g_m, g_dyadic, g_lambda, erg_c.out, ctx);
    } else if (name == "variation") {
        setup_manifest(var_c);
        if (var_c.check) run_check_suite("variation");
        cmd_variation(var_r, var_file, var_random, var_seed, ctx);
    } else if (name == "minor") {
        setup_manifest(min_c);
        if (min_c.check) run_check_suite("minor");
        cmd_minor(m_cstr, m_nlist, min_c.out, ctx);
    }
    ctx.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_cli(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const CheckFailure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 3;
    } catch (const ComputationError& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
