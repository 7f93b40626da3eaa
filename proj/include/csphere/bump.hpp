#pragma once

#include <cmath>
#include <vector>

#include "csphere/util.hpp"

namespace csphere {

// C-infinity even plateau built from s(u) = exp(-1/u): equals 1 on
// [-plateau, plateau], vanishes outside (-support, support).
struct PlateauFn {
    double plateau = 0.0;
    double support = 0.0;

    PlateauFn() = default;
    PlateauFn(double a, double b) : plateau(a), support(b) {
        if (!(0.0 < a && a < b)) throw UsageError("PlateauFn: need 0 < plateau < support");
    }

    static double ramp(double u) {  // 0 at u<=0, 1 at u>=1, smooth monotone
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double s0 = std::exp(-1.0 / u);
        const double s1 = std::exp(-1.0 / (1.0 - u));
        return s0 / (s0 + s1);
    }

    double operator()(double x) const {
        x = std::abs(x);
        if (x <= plateau) return 1.0;
        if (x >= support) return 0.0;
        return ramp((support - x) / (support - plateau));
    }
};

// Normalized bump exp(-1/(1-u^2)) on (-1,1) with unit mass, plus its CDF
// (tabulated once on a fine grid; linear interpolation).
class UnitBump {
public:
    UnitBump() {
        const int n = 4096;
        cdf_.resize(n + 1);
        double acc = 0.0;
        cdf_[0] = 0.0;
        std::vector<double> vals(n + 1);
        for (int i = 0; i <= n; ++i) vals[static_cast<std::size_t>(i)] = raw(-1.0 + 2.0 * i / n);
        for (int i = 1; i <= n; ++i) {
            acc += 0.5 * (vals[static_cast<std::size_t>(i - 1)] + vals[static_cast<std::size_t>(i)]) * (2.0 / n);
            cdf_[static_cast<std::size_t>(i)] = acc;
        }
        mass_ = acc;
    }

    double operator()(double u) const { return raw(u) / mass_; }

    // integral of the normalized bump over (-inf, u]
    double cdf(double u) const {
        if (u <= -1.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double x = (u + 1.0) / 2.0 * (static_cast<double>(cdf_.size()) - 1.0);
        const auto i = static_cast<std::size_t>(x);
        const double f = x - static_cast<double>(i);
        const double v = cdf_[i] * (1.0 - f) + cdf_[std::min(i + 1, cdf_.size() - 1)] * f;
        return v / mass_;
    }

private:
    static double raw(double u) {
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
    }
    std::vector<double> cdf_;
    double mass_ = 1.0;
};

inline const UnitBump& unit_bump() {
    static const UnitBump b;
    return b;
}

// Smoothed half-line indicators phi^{+-}_{a,delta} = 1_{[a +- delta, 100]} * phi_delta;
// the upper cutoff 100 never binds for |t| <= 2, so this reduces to the bump CDF.
inline double smoothed_step_plus(double t, double a, double delta) {
    return unit_bump().cdf((t - (a + delta)) / delta);
}

inline double smoothed_step_minus(double t, double a, double delta) {
    return unit_bump().cdf((t - (a - delta)) / delta);
}

}  // namespace csphere
