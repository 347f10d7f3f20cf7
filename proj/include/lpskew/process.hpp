#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lpskew::process {

struct InnovationSpec {
    enum class Law { gaussian, centered_exponential, custom };

    Law law = Law::gaussian;
    double sigma2 = 1.0;  // Var(eps)
    double eta = 0.0;     // E eps^3
    double m4 = 3.0;      // E eps^4
    double m6 = 15.0;     // E eps^6
    double rate = 1.0;    // exponential rate, meaningful for centered_exponential

    static InnovationSpec gaussian(double sigma2);
    static InnovationSpec centered_exponential(double rate);
    static InnovationSpec custom(double sigma2, double eta, double m4, double m6);

    void validate() const;
};

struct LinearProcessSpec {
    double mu = 0.0;
    std::vector<double> ar;  // phi_1..phi_p
    std::vector<double> ma;  // theta_1..theta_q
    double d = 0.0;          // memory parameter, 0 <= d < 0.5
    InnovationSpec innovation;
    // For non-FARIMA long-memory coefficients a_i ~ c * i^{d-1}, the level c
    // cannot be inferred; callers may pin it here. FARIMA specs leave it unset.
    std::optional<double> c_d_override;

    void validate() const;
    // Stable content hash used to stamp simulated paths.
    [[nodiscard]] std::string fingerprint() const;
};

struct MACoefficients {
    std::vector<double> a;       // a_0..a_M
    std::int64_t truncation_M = 0;
    double d = 0.0;
    double tail_estimate = 0.0;  // bound on sum_{i>M} a_i^2
};

// Truncated MA(inf) weights: fractional binomial recursion composed with the
// ARMA impulse response (plain ARMA recursion when d = 0).
MACoefficients expand_ma(const LinearProcessSpec& spec, std::int64_t M);

// m(d): theta(1)/phi(1) when d = 0, else c(d)/d with c(d) = theta(1)/(phi(1)Gamma(d)).
double coefficient_sum_m(const LinearProcessSpec& spec);

// Smallest doubling-search M whose squared-coefficient tail estimate is below
// tol relative to the retained mass.
std::int64_t choose_truncation(const LinearProcessSpec& spec, std::int64_t n, double tol);

// Roots of 1 - c_1 z - ... - c_k z^k via Durand-Kerner iteration.
std::vector<std::complex<double>> unit_series_poly_roots(const std::vector<double>& coeffs);

// True when every root of phi(z) = 1 - sum phi_k z^k lies outside the closed
// unit disk by the given margin.
bool is_causal_ar(const std::vector<double>& ar, double margin = 1e-9);

}  // namespace lpskew::process
