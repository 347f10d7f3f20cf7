#pragma once

#include <cstdint>
#include <span>

namespace lpskew::estimators {

struct BandwidthPlan {
    std::int64_t q0 = 1;
    std::int64_t q1 = 1;
    std::int64_t q2 = 1;
    std::int64_t q3 = 2;

    void validate(std::int64_t n) const;
};

struct SkewEstimate {
    double s3_bar = 0.0;
    double v_hat = 0.0;
    double k_hat = 0.0;  // NaN when flagged
    bool flagged = false;
    double d_used = 0.0;
    BandwidthPlan bandwidths;
    std::int64_t n = 0;
};

// gamma_hat(h) = (1/n) sum_{j=1}^{n-h} (X_j - mean)(X_{j+h} - mean); divisor n.
double sample_autocov(std::span<const double> x, std::int64_t h);

// q0^{-2d} (gamma_0 + 2 sum_{h<=q0} (1 - h/q0) gamma_h); may be <= 0 on
// pathological samples, which callers must treat as a flagged estimate.
double long_run_variance(std::span<const double> x, double d, std::int64_t q0);

// Third-order sample covariance at lag h; h = 0 is the single-cube mean.
double delta_bar(std::span<const double> x, std::int64_t h);

// Third-order sample covariance at lag pair (h, h'), both >= 1.
double delta_bar2(std::span<const double> x, std::int64_t h, std::int64_t h_prime);

// Scaled third-moment estimator combining the three delta_bar layers.
double s3_bar(std::span<const double> x, double d, const BandwidthPlan& plan);

// Scaled skewness estimate: s3_bar / v_hat^{3/2}, flagged when v_hat <= 0.
SkewEstimate k_hat(std::span<const double> x, double d, const BandwidthPlan& plan);

// Default bandwidth rule: d > 0 gives q1 = q2 = ceil(n^0.2), q3 = max(2,
// ceil(n^0.1)), q0 = ceil(n^{0.5-d}); d = 0 gives all four = ceil(n^0.33).
BandwidthPlan default_bandwidths(std::int64_t n, double d);

// Log-periodogram regression over the first ceil(n^bandwidth_frac) Fourier
// frequencies; result clamped to [0, 0.499].
double estimate_d_gph(std::span<const double> x, double bandwidth_frac = 0.5);

// ceil with a snap-to-integer guard against pow() landing just above an exact
// integer power.
std::int64_t ceil_power(std::int64_t n, double exponent);

}  // namespace lpskew::estimators
