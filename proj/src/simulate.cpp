#include "lpskew/simulate.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lpskew/errors.hpp"
#include "lpskew/fft.hpp"
#include "lpskew/rng.hpp"
#include "lpskew/summation.hpp"

namespace lpskew::simulate {

InnovationMoments innovation_moments(const process::InnovationSpec& spec) {
    spec.validate();
    return {spec.sigma2, spec.eta, spec.m4, spec.m6};
}

namespace {

void draw_innovations(const process::InnovationSpec& innov, std::uint64_t seed,
                      std::vector<double>& out) {
    rng::VariateStream stream(seed);
    switch (innov.law) {
        case process::InnovationSpec::Law::gaussian: {
            const double sd = std::sqrt(innov.sigma2);
            for (auto& e : out) e = sd * stream.normal();
            return;
        }
        case process::InnovationSpec::Law::centered_exponential: {
            const double mean = 1.0 / innov.rate;
            for (auto& e : out) e = stream.exponential(innov.rate) - mean;
            return;
        }
        case process::InnovationSpec::Law::custom:
            throw DataError("custom innovation laws carry moments only and cannot be sampled");
    }
    throw DataError("unknown innovation law");
}

}  // namespace

PreparedSimulator::PreparedSimulator(process::LinearProcessSpec spec, std::int64_t n,
                                     std::int64_t M, ConvolveStrategy strategy)
    : spec_(std::move(spec)), n_(n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (M < 0) throw std::invalid_argument("M must be >= 0");
    spec_.validate();
    if (spec_.innovation.law == process::InnovationSpec::Law::custom) {
        throw DataError("custom innovation laws carry moments only and cannot be sampled");
    }
    coeffs_ = process::expand_ma(spec_, M);
    fingerprint_ = spec_.fingerprint();

    CompensatedSum mass;
    for (double v : coeffs_.a) mass.add(v * v);
    if (coeffs_.tail_estimate > 0.10 * mass.value()) {
        truncation_warning_ =
            "truncation M leaves more than 10% of the squared-coefficient mass in the tail";
    }

    const auto work = static_cast<long double>(n) * static_cast<long double>(M + 1);
    switch (strategy) {
        case ConvolveStrategy::direct: use_fft_ = false; break;
        case ConvolveStrategy::fft: use_fft_ = true; break;
        case ConvolveStrategy::automatic: use_fft_ = work > 4194304.0L; break;
        default: use_fft_ = true; break;
    }
    if (use_fft_) {
        // Circular wrap-around of size >= M+n only contaminates the discarded
        // warm-up block, so the transform does not need the full 2M+n length.
        nfft_ = fft::next_pow2(static_cast<std::size_t>(M + n));
        spectrum_.assign(nfft_, {0.0, 0.0});
        for (std::size_t i = 0; i < coeffs_.a.size(); ++i) spectrum_[i] = coeffs_.a[i];
        fft::transform(spectrum_, false);
    }
}

SamplePath PreparedSimulator::run(std::uint64_t seed) const {
    const std::int64_t M = coeffs_.truncation_M;
    std::vector<double> eps(static_cast<std::size_t>(M + n_));
    draw_innovations(spec_.innovation, seed, eps);

    SamplePath path;
    path.x.resize(static_cast<std::size_t>(n_));
    if (!use_fft_) {
        const auto& a = coeffs_.a;
        for (std::int64_t t = 0; t < n_; ++t) {
            double s = 0.0;
            // eps[M + t] holds the time-(t+1) innovation.
            for (std::int64_t i = 0; i <= M; ++i) {
                s += a[static_cast<std::size_t>(i)] * eps[static_cast<std::size_t>(M + t - i)];
            }
            path.x[static_cast<std::size_t>(t)] = spec_.mu + s;
        }
    } else {
        std::vector<std::complex<double>> buf(nfft_, {0.0, 0.0});
        for (std::size_t i = 0; i < eps.size(); ++i) buf[i] = eps[i];
        fft::transform(buf, false);
        for (std::size_t k = 0; k < nfft_; ++k) buf[k] *= spectrum_[k];
        fft::transform(buf, true);
        for (std::int64_t t = 0; t < n_; ++t) {
            path.x[static_cast<std::size_t>(t)] = spec_.mu + buf[static_cast<std::size_t>(M + t)].real();
        }
    }
    path.spec_fingerprint = fingerprint_;
    path.seed = seed;
    path.truncation_M = M;
    if (!truncation_warning_.empty()) path.warnings.push_back(truncation_warning_);
    return path;
}

SamplePath simulate_path(const process::LinearProcessSpec& spec, std::int64_t n,
                         std::uint64_t seed, std::int64_t M, ConvolveStrategy strategy) {
    return PreparedSimulator(spec, n, M, strategy).run(seed);
}

}  // namespace lpskew::simulate
