#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lpskew::fft {

// In-place iterative radix-2 transform; size must be a power of two.
// inverse=true applies the 1/N factor.
void transform(std::vector<std::complex<double>>& a, bool inverse);

std::size_t next_pow2(std::size_t n);

// Full linear convolution, output length |a| + |b| - 1.
std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b);
std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b);

}  // namespace lpskew::fft
