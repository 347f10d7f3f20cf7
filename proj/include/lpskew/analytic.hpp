#pragma once

#include <cstdint>
#include <optional>

#include "lpskew/process.hpp"

namespace lpskew::analytic {

struct AnalyticConstants {
    double d;
    double m;   // m(d)
    double I2;  // integral of ((1+x)^d - x^d)^2 over (0, inf)
    double I3;  // integral of ((1+x)^d - x^d)^3 over (0, inf)
    double k;   // limiting scaled skewness k(d)
    double v;   // limiting variance constant v(d) = sigma^2 m^2 (1/(1+2d) + I2)
};

// I_p(d) = int_0^inf ((1+x)^d - x^d)^p dx to absolute error <= 1e-9.
// Exactly zero at d = 0.
double tail_integral(int p, double d);

// Remainder int_X^inf ((1+x)^d - x^d)^p dx for X >= 1 (used by the oracle's
// truncation completion).
double tail_integral_from(int p, double d, double X);

// k(d) = (eta/sigma^3) (1/(1+3d) + I3) / (1/(1+2d) + I2)^{3/2}.
double k_of_d(double d, double eta, double sigma2);

struct MomentLimit {
    double limit;
    double scaling_exponent;  // E S_n^k ~ limit * n^scaling_exponent
};

// Partial-sum moment limits: even k = 2p scales as n^{p(1+2d)}, odd k = 3+2l
// as n^{k(1+2d)/2 - 1/2}.
MomentLimit moment_limit(int k, double d, double eta, double sigma2, double m);

struct OracleMoments {
    double ES2;  // Var S_n
    double ES3;  // E S_n^3 (mean-centered process)
};

// How exact_moments_oracle treats the coefficient mass beyond truncation_M:
// none sums the truncated process exactly; power_law adds the analytic
// continuation of the long-memory tail a_i ~ c i^{d-1} (requires d > 0 and
// M >= n; no-op at d = 0 where the tail is geometric).
enum class TailPolicy { none, power_law };

// Exact Var S_n and E S_n^3 of the truncated process, by direct summation
// over innovation indices: S_n = sum_j b_j eps_j with b_j the window-overlap
// coefficient sums. Cost O(n + M).
OracleMoments exact_moments_oracle(const process::MACoefficients& coeffs, std::int64_t n,
                                   const process::InnovationSpec& innov,
                                   TailPolicy policy = TailPolicy::none);

// Third-order covariances of the truncated process: h_prime absent gives
// Delta(h) (with the single-cube convention at h = 0), present gives
// Delta(h, h').
double delta_theoretical(const process::MACoefficients& coeffs, std::int64_t h,
                         std::optional<std::int64_t> h_prime,
                         const process::InnovationSpec& innov);

// Bundle of all limit constants for a given d, innovation law and m(d).
AnalyticConstants constants_for(double d, const process::InnovationSpec& innov, double m);

}  // namespace lpskew::analytic
