#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lpskew/fft.hpp"
#include "lpskew/rng.hpp"

using namespace lpskew;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * j) /
                                 static_cast<double>(n);
            acc += a[j] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    rng::VariateStream v(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = v.normal();
    return out;
}

}  // namespace

TEST_SUITE("fft") {

TEST_CASE("next_pow2 rounds up and fixes edge cases") {
    CHECK(fft::next_pow2(0) == 1);
    CHECK(fft::next_pow2(1) == 1);
    CHECK(fft::next_pow2(2) == 2);
    CHECK(fft::next_pow2(3) == 4);
    CHECK(fft::next_pow2(1024) == 1024);
    CHECK(fft::next_pow2(1025) == 2048);
}

TEST_CASE("transform agrees with the naive DFT") {
    rng::VariateStream v(5);
    std::vector<std::complex<double>> a(16);
    for (auto& z : a) z = {v.normal(), v.normal()};
    auto expected = naive_dft(a);
    auto got = a;
    fft::transform(got, false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(got[i] - expected[i]) < 1e-12);
    }
}

TEST_CASE("inverse transform inverts the forward transform") {
    rng::VariateStream v(6);
    std::vector<std::complex<double>> a(64);
    for (auto& z : a) z = {v.normal(), v.normal()};
    auto round = a;
    fft::transform(round, false);
    fft::transform(round, true);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(round[i] - a[i]) < 1e-12);
    }
}

TEST_CASE("convolving with a unit impulse is the identity") {
    const std::vector<double> x = {3.0, -1.0, 2.0, 0.5};
    const std::vector<double> delta = {1.0};
    const auto direct = fft::convolve_direct(x, delta);
    const auto viafft = fft::convolve_fft(x, delta);
    REQUIRE(direct.size() == x.size());
    REQUIRE(viafft.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(direct[i] == doctest::Approx(x[i]).epsilon(1e-14));
        CHECK(viafft[i] == doctest::Approx(x[i]).epsilon(1e-14));
    }
}

TEST_CASE("small convolution matches a hand computation") {
    // (1 + 2z)(3 + 4z) = 3 + 10z + 8z^2
    const auto c = fft::convolve_direct(std::vector<double>{1, 2}, std::vector<double>{3, 4});
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 3.0);
    CHECK(c[1] == 10.0);
    CHECK(c[2] == 8.0);
}

TEST_CASE("direct and FFT convolutions agree on random input") {
    for (auto [na, nb] : {std::pair<std::size_t, std::size_t>{33, 45},
                          {128, 7},
                          {257, 256},
                          {1000, 1}}) {
        const auto a = random_vector(na, 11 + na);
        const auto b = random_vector(nb, 17 + nb);
        const auto direct = fft::convolve_direct(a, b);
        const auto viafft = fft::convolve_fft(a, b);
        REQUIRE(direct.size() == viafft.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            worst = std::max(worst, std::abs(direct[i] - viafft[i]));
        }
        CHECK(worst < 1e-10);
    }
}

}
