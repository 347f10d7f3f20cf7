#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpskew/process.hpp"

namespace lpskew::simulate {

struct SamplePath {
    std::vector<double> x;
    std::optional<std::string> spec_fingerprint;  // absent for ingested data
    std::optional<std::uint64_t> seed;            // absent for ingested data
    std::int64_t truncation_M = 0;
    std::vector<std::string> warnings;
};

struct InnovationMoments {
    double sigma2;
    double eta;
    double m4;
    double m6;
};

InnovationMoments innovation_moments(const process::InnovationSpec& spec);

enum class ConvolveStrategy { automatic, direct, fft };

// Draws M + n innovations for the stream seed and filters them through the
// truncated MA weights: X_t = mu + sum_{i<=M} a_i eps_{t-i}. Bit-identical
// output for identical (spec, n, seed, M, strategy).
SamplePath simulate_path(const process::LinearProcessSpec& spec, std::int64_t n,
                         std::uint64_t seed, std::int64_t M,
                         ConvolveStrategy strategy = ConvolveStrategy::automatic);

// Reusable generation state for one (spec, n, M): coefficients are expanded
// (and their spectrum cached) once, then many seeds can be run. Thread-safe
// for concurrent run() calls.
class PreparedSimulator {
public:
    PreparedSimulator(process::LinearProcessSpec spec, std::int64_t n, std::int64_t M,
                      ConvolveStrategy strategy = ConvolveStrategy::automatic);

    [[nodiscard]] SamplePath run(std::uint64_t seed) const;
    [[nodiscard]] const process::MACoefficients& coefficients() const { return coeffs_; }

private:
    process::LinearProcessSpec spec_;
    process::MACoefficients coeffs_;
    std::int64_t n_;
    std::string fingerprint_;
    bool use_fft_;
    std::size_t nfft_ = 0;
    std::vector<std::complex<double>> spectrum_;  // FFT of the weights, cached
    std::string truncation_warning_;
};

}  // namespace lpskew::simulate
