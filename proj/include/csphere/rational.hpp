#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "csphere/util.hpp"

namespace csphere {

// The exponent c = p/q in lowest terms, with gamma = q/p. Keeping c rational
// makes floor(m^c) a pure integer computation (q-th root of m^p).
struct RationalExponent {
    std::int64_t num = 1;  // p
    std::int64_t den = 1;  // q

    RationalExponent() = default;

    RationalExponent(std::int64_t p, std::int64_t q) : num(p), den(q) {
        if (q <= 0) throw UsageError("exponent denominator must be positive");
        if (p <= 0) throw UsageError("exponent numerator must be positive");
        const std::int64_t g = std::gcd(p, q);
        num = p / g;
        den = q / g;
        // c in [1, 2]; c = 2 is the Euclidean sanity mode used by counting.
        if (num < den || num > 2 * den)
            throw UsageError("exponent c = " + str() + " outside [1, 2]");
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    double gamma_value() const { return static_cast<double>(den) / static_cast<double>(num); }

    bool is_one() const { return num == den; }
    bool is_two() const { return num == 2 * den; }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    // Strict "p/q" or integer parser; anything else is a usage error.
    static RationalExponent parse(const std::string& s) {
        if (s.empty()) throw UsageError("empty exponent");
        std::size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                std::size_t pos = 0;
                const long long p = std::stoll(s, &pos);
                if (pos != s.size()) throw UsageError("trailing characters in exponent '" + s + "'");
                return RationalExponent(p, 1);
            }
            std::size_t pos = 0;
            const long long p = std::stoll(s.substr(0, slash), &pos);
            if (pos != slash) throw UsageError("bad numerator in exponent '" + s + "'");
            const long long q = std::stoll(s.substr(slash + 1), &pos);
            if (pos != s.size() - slash - 1)
                throw UsageError("bad denominator in exponent '" + s + "'");
            return RationalExponent(p, q);
        } catch (const std::invalid_argument&) {
            throw UsageError("cannot parse exponent '" + s + "'");
        } catch (const std::out_of_range&) {
            throw UsageError("exponent '" + s + "' out of range");
        }
    }

    bool operator==(const RationalExponent& o) const {
        return num == o.num && den == o.den;
    }
};

}  // namespace csphere
