#include "lpskew/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpskew::fft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft size must be a nonzero power of two");
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += ai * b[j];
        }
    }
    return out;
}

std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t nfft = next_pow2(out_len);
    // Pack both real inputs into one complex transform: fa in the real part,
    // fb in the imaginary part; their spectra are recovered by symmetry.
    std::vector<std::complex<double>> buf(nfft, {0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i) buf[i].real(a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) buf[i].imag(b[i]);
    transform(buf, false);
    std::vector<std::complex<double>> prod(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        const std::size_t kc = (nfft - k) & (nfft - 1);
        const std::complex<double> z = buf[k];
        const std::complex<double> zc = std::conj(buf[kc]);
        const std::complex<double> fa = 0.5 * (z + zc);
        const std::complex<double> fb = std::complex<double>(0.0, -0.5) * (z - zc);
        prod[k] = fa * fb;
    }
    transform(prod, true);
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = prod[i].real();
    return out;
}

}  // namespace lpskew::fft
