#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "csphere/rational.hpp"
#include "csphere/util.hpp"

namespace csphere {

// floor(m^(p/q)) as the unique k with k^q <= m^p < (k+1)^q, computed with
// arbitrary-precision integers. Bit-exact; no floating point anywhere.
inline std::int64_t floor_pow(std::int64_t m, const RationalExponent& c) {
    if (m < 0) throw UsageError("floor_pow: negative argument");
    if (m <= 1) return m;  // 0^c = 0, 1^c = 1
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(m),
                  static_cast<unsigned long>(c.num));
    if (c.den > 1) {
        mpz_class r;
        mpz_root(r.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(c.den));
        t = r;
    }
    if (!t.fits_slong_p())
        throw ComputationError("floor_pow: result does not fit in 64 bits");
    return static_cast<std::int64_t>(t.get_si());
}

// Cached table f[m] = floor(m^c) for m = 0..mmax; built in parallel, each
// slot written exactly once.
struct FloorPowTable {
    RationalExponent c;
    std::vector<std::int64_t> f;

    FloorPowTable() = default;

    FloorPowTable(const RationalExponent& exponent, std::int64_t mmax) : c(exponent) {
        f.resize(static_cast<std::size_t>(mmax) + 1);
        parallel_for(0, mmax + 1, [&](std::int64_t m) {
            f[static_cast<std::size_t>(m)] = floor_pow(m, c);
        });
    }

    std::int64_t operator[](std::int64_t m) const { return f[static_cast<std::size_t>(m)]; }
    std::int64_t max_m() const { return static_cast<std::int64_t>(f.size()) - 1; }

    // Largest m with floor(m^c) <= v (0 when none); f is nondecreasing.
    std::int64_t inverse_floor(std::int64_t v) const {
        auto it = std::upper_bound(f.begin(), f.end(), v);
        return static_cast<std::int64_t>(it - f.begin()) - 1;
    }
};

}  // namespace csphere
