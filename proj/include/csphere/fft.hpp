#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include "csphere/util.hpp"

namespace csphere {

inline std::size_t fft_size_for(std::size_t n) {
    std::size_t l = 1;
    while (l < n) l <<= 1;
    return l;
}

// Iterative radix-2 Cooley-Tukey, in place; a.size() must be a power of 2.
// inverse=true uses conjugate roots and divides by n.
inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ComputationError("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// Linear convolution of real sequences via one complex FFT round trip.
inline std::vector<double> convolve_real(const std::vector<double>& a,
                                         const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out = a.size() + b.size() - 1;
    const std::size_t n = fft_size_for(out);
    std::vector<std::complex<double>> fa(n), fb(n);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft(fa, false);
    fft(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft(fa, true);
    std::vector<double> r(out);
    for (std::size_t i = 0; i < out; ++i) r[i] = fa[i].real();
    return r;
}

namespace ntt {

// p = 29 * 2^57 + 1, primitive root 3; supports transforms up to length 2^57.
inline constexpr std::uint64_t kMod = 4179340454199820289ULL;
inline constexpr std::uint64_t kRoot = 3ULL;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % kMod);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, b);
        b = mulmod(b, b);
        e >>= 1;
    }
    return r;
}

inline void transform(std::vector<std::uint64_t>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ComputationError("ntt: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::uint64_t wl = powmod(kRoot, (kMod - 1) / len);
        if (inverse) wl = powmod(wl, kMod - 2);
        for (std::size_t i = 0; i < n; i += len) {
            std::uint64_t w = 1;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::uint64_t u = a[i + k];
                const std::uint64_t v = mulmod(a[i + k + len / 2], w);
                a[i + k] = u + v < kMod ? u + v : u + v - kMod;
                a[i + k + len / 2] = u >= v ? u - v : u + kMod - v;
                w = mulmod(w, wl);
            }
        }
    }
    if (inverse) {
        const std::uint64_t ninv = powmod(n % kMod, kMod - 2);
        for (auto& x : a) x = mulmod(x, ninv);
    }
}

// Exact convolution mod p; exact over Z when the true values stay below p.
inline std::vector<std::uint64_t> convolve(const std::vector<std::uint64_t>& a,
                                           const std::vector<std::uint64_t>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out = a.size() + b.size() - 1;
    const std::size_t n = fft_size_for(out);
    std::vector<std::uint64_t> fa(n, 0), fb(n, 0);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    transform(fa, false);
    transform(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] = mulmod(fa[i], fb[i]);
    transform(fa, true);
    fa.resize(out);
    return fa;
}

}  // namespace ntt

// Exact convolution of nonnegative integer sequences. The floating FFT result
// is accepted only when every bin lies within `margin` of an integer;
// otherwise the exact number-theoretic transform is used, so the output is
// never a wrong count. used_ntt reports which route produced the result.
inline std::vector<std::int64_t> convolve_exact(const std::vector<std::int64_t>& a,
                                                const std::vector<std::int64_t>& b,
                                                bool* used_ntt = nullptr,
                                                double margin = 0.25) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> da(a.begin(), a.end()), db(b.begin(), b.end());
    const std::vector<double> fd = convolve_real(da, db);
    bool ok = true;
    std::vector<std::int64_t> out(fd.size());
    for (std::size_t i = 0; i < fd.size(); ++i) {
        const double r = std::round(fd[i]);
        if (std::abs(fd[i] - r) > margin || r < 0) {
            ok = false;
            break;
        }
        out[i] = static_cast<std::int64_t>(r);
    }
    if (ok) {
        if (used_ntt) *used_ntt = false;
        return out;
    }
    std::vector<std::uint64_t> ua(a.begin(), a.end()), ub(b.begin(), b.end());
    const auto r = ntt::convolve(ua, ub);
    out.assign(r.begin(), r.end());
    if (used_ntt) *used_ntt = true;
    return out;
}

}  // namespace csphere
