#include "lpskew/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpskew/errors.hpp"
#include "lpskew/summation.hpp"

namespace lpskew::analytic {

namespace {

void check_d(double d) {
    if (!(d >= 0.0 && d < 0.5)) throw std::domain_error("d must lie in [0, 0.5)");
}

void check_p(int p) {
    if (p != 2 && p != 3) throw std::invalid_argument("tail integral power must be 2 or 3");
}

double integrand_main(double x, int p, double d) {
    const double g = std::pow(1.0 + x, d) - std::pow(x, d);
    double v = g * g;
    if (p == 3) v *= g;
    return v;
}

// ((1+t)^d - 1)^p t^{-pd-2}, the x = 1/t image of the integrand on [1, inf).
double integrand_inverted(double t, int p, double d) {
    const double g = std::expm1(d * std::log1p(t));
    double v = g * g;
    if (p == 3) v *= g;
    return v * std::pow(t, -static_cast<double>(p) * d - 2.0);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fm = f(0.5 * (a + b));
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 52);
}

// Generalized binomial coefficients C(alpha, m), m = 0..count-1.
std::vector<double> binomial_series(double alpha, int count) {
    std::vector<double> c(static_cast<std::size_t>(count));
    c[0] = 1.0;
    for (int m = 1; m < count; ++m) {
        c[static_cast<std::size_t>(m)] =
            c[static_cast<std::size_t>(m - 1)] * (alpha - static_cast<double>(m - 1)) / static_cast<double>(m);
    }
    return c;
}

constexpr int kSeriesTerms = 96;

// int_0^delta ((1+x)^d - x^d)^p dx by expanding the binomial power in x^d and
// each (1+x)^{d(p-j)} as a series; exact summation of the elementary pieces.
double head_by_series(int p, double d, double delta) {
    CompensatedSum total;
    double cpj = 1.0;  // C(p, j) with alternating sign folded in below
    for (int j = 0; j <= p; ++j) {
        const double beta = d * static_cast<double>(p - j);
        const auto coeffs = binomial_series(beta, kSeriesTerms);
        const double dj = d * static_cast<double>(j);
        CompensatedSum piece;
        double dpow = std::pow(delta, dj + 1.0);
        for (int m = 0; m < kSeriesTerms; ++m) {
            piece.add(coeffs[static_cast<std::size_t>(m)] * dpow / (static_cast<double>(m) + dj + 1.0));
            dpow *= delta;
        }
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        total.add(sign * cpj * piece.value());
        cpj = cpj * static_cast<double>(p - j) / static_cast<double>(j + 1);
    }
    return total.value();
}

// Power-series coefficients of ((1+t)^d - 1)^p around t = 0.
std::vector<double> inverted_series_coeffs(int p, double d) {
    const auto base = binomial_series(d, kSeriesTerms);  // (1+t)^d = sum C(d,m) t^m
    std::vector<double> q(kSeriesTerms, 0.0);
    for (int m = 1; m < kSeriesTerms; ++m) q[static_cast<std::size_t>(m)] = base[static_cast<std::size_t>(m)];
    std::vector<double> pw(kSeriesTerms, 0.0);
    pw[0] = 1.0;
    for (int rep = 0; rep < p; ++rep) {
        std::vector<double> nxt(kSeriesTerms, 0.0);
        for (int i = 0; i < kSeriesTerms; ++i) {
            const double pi = pw[static_cast<std::size_t>(i)];
            if (pi == 0.0) continue;
            for (int j = 1; i + j < kSeriesTerms; ++j) {
                nxt[static_cast<std::size_t>(i + j)] += pi * q[static_cast<std::size_t>(j)];
            }
        }
        pw = std::move(nxt);
    }
    return pw;
}

// int_0^T t^{-pd-2} ((1+t)^d - 1)^p dt for T <= 1/2, term-by-term from the series.
double inverted_head_by_series(int p, double d, double T) {
    const auto s = inverted_series_coeffs(p, d);
    const double shift = -static_cast<double>(p) * d - 1.0;
    CompensatedSum total;
    double tpow = std::pow(T, static_cast<double>(p) + shift);
    for (int k = p; k < kSeriesTerms; ++k) {
        total.add(s[static_cast<std::size_t>(k)] * tpow / (static_cast<double>(k) + shift));
        tpow *= T;
    }
    return total.value();
}

constexpr double kSplit = 0.5;
constexpr double kQuadTol = 1e-13;

}  // namespace

double tail_integral(int p, double d) {
    check_p(p);
    check_d(d);
    if (d == 0.0) return 0.0;
    const double head = head_by_series(p, d, kSplit);
    const double mid = adaptive_simpson([p, d](double x) { return integrand_main(x, p, d); },
                                        kSplit, 1.0, kQuadTol);
    const double far = tail_integral_from(p, d, 1.0);
    return head + mid + far;
}

double tail_integral_from(int p, double d, double X) {
    check_p(p);
    check_d(d);
    if (!(X >= 1.0)) throw std::invalid_argument("tail remainder requires X >= 1");
    if (d == 0.0) return 0.0;
    const double T = 1.0 / X;
    if (T <= kSplit) return inverted_head_by_series(p, d, T);
    return inverted_head_by_series(p, d, kSplit) +
           adaptive_simpson([p, d](double t) { return integrand_inverted(t, p, d); },
                            kSplit, T, kQuadTol);
}

double k_of_d(double d, double eta, double sigma2) {
    check_d(d);
    if (!(sigma2 > 0.0)) throw std::domain_error("sigma2 must be positive");
    const double sigma3 = sigma2 * std::sqrt(sigma2);
    if (d == 0.0) return eta / sigma3;
    const double I2 = tail_integral(2, d);
    const double I3 = tail_integral(3, d);
    const double num = 1.0 / (1.0 + 3.0 * d) + I3;
    const double den = 1.0 / (1.0 + 2.0 * d) + I2;
    return (eta / sigma3) * num / (den * std::sqrt(den));
}

MomentLimit moment_limit(int k, double d, double eta, double sigma2, double m) {
    if (k < 2) throw std::invalid_argument("moment order must be >= 2");
    check_d(d);
    const double I2 = tail_integral(2, d);
    const double e2 = 1.0 / (1.0 + 2.0 * d) + I2;
    const double mk = std::pow(m, k);
    if (k % 2 == 0) {
        const int p = k / 2;
        double pair_count = 1.0;  // k! / (2^p p!)
        for (int j = 1; j <= p; ++j) pair_count *= static_cast<double>(2 * j - 1);
        return {mk * std::pow(sigma2, p) * pair_count * std::pow(e2, p),
                static_cast<double>(p) * (1.0 + 2.0 * d)};
    }
    const int l = (k - 3) / 2;
    const double I3 = tail_integral(3, d);
    const double e3 = 1.0 / (1.0 + 3.0 * d) + I3;
    const double choose3 = static_cast<double>(k) * (k - 1) * (k - 2) / 6.0;
    double pair_count = 1.0;  // (2l)! / (2^l l!)
    for (int j = 1; j <= l; ++j) pair_count *= static_cast<double>(2 * j - 1);
    return {mk * eta * std::pow(sigma2, l) * choose3 * pair_count * e3 * std::pow(e2, l),
            static_cast<double>(k) * (1.0 + 2.0 * d) / 2.0 - 0.5};
}

OracleMoments exact_moments_oracle(const process::MACoefficients& coeffs, std::int64_t n,
                                   const process::InnovationSpec& innov, TailPolicy policy) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const std::int64_t M = coeffs.truncation_M;
    if (coeffs.a.size() != static_cast<std::size_t>(M) + 1) {
        throw std::invalid_argument("coefficient vector length must be truncation_M + 1");
    }
    // Prefix sums A_j = a_0 + ... + a_j.
    std::vector<double> A(coeffs.a.size());
    CompensatedSum acc;
    for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
        acc.add(coeffs.a[i]);
        A[i] = acc.value();
    }

    CompensatedSum s2, s3;
    auto add_b = [&s2, &s3](double b) {
        const double b2 = b * b;
        s2.add(b2);
        s3.add(b2 * b);
    };
    // Innovations inside the window: eps_{n-k} for k = 0..n-1 carries A_min(k, M).
    for (std::int64_t k = 0; k < n; ++k) {
        add_b(A[static_cast<std::size_t>(std::min(k, M))]);
    }
    // Innovations before the window: eps_{-m} for m = 0..M-1 carries
    // A_min(n+m, M) - A_m.
    for (std::int64_t m = 0; m < M; ++m) {
        add_b(A[static_cast<std::size_t>(std::min(n + m, M))] - A[static_cast<std::size_t>(m)]);
    }

    double ES2 = innov.sigma2 * s2.value();
    double ES3 = innov.eta * s3.value();

    if (policy == TailPolicy::power_law && coeffs.d > 0.0) {
        if (M < n) throw std::invalid_argument("power-law tail completion requires M >= n");
        // Level of the coefficient tail a_i ~ c i^{d-1}, estimated at the cutoff.
        const double d = coeffs.d;
        const double c_est = coeffs.a.back() * std::pow(static_cast<double>(M), 1.0 - d);
        const double kappa = c_est / d;
        const double nd = static_cast<double>(n);
        const double Md = static_cast<double>(M);
        const double gM = std::pow(nd + Md, d) - std::pow(Md, d);
        for (int p = 2; p <= 3; ++p) {
            // Euler-Maclaurin: sum_{m >= M} b_m^p ~ integral + half the edge term.
            const double integral =
                std::pow(nd, static_cast<double>(p) * d + 1.0) * tail_integral_from(p, d, Md / nd);
            const double edge = 0.5 * std::pow(gM, p);
            const double add = std::pow(kappa, p) * (integral + edge);
            if (p == 2) {
                ES2 += innov.sigma2 * add;
            } else {
                ES3 += innov.eta * add;
            }
        }
    }
    return {ES2, ES3};
}

double delta_theoretical(const process::MACoefficients& coeffs, std::int64_t h,
                         std::optional<std::int64_t> h_prime,
                         const process::InnovationSpec& innov) {
    const auto& a = coeffs.a;
    const auto len = static_cast<std::int64_t>(a.size());
    if (h < 0) throw std::invalid_argument("h must be >= 0");
    if (!h_prime) {
        if (h == 0) {
            CompensatedSum cubes;
            for (double v : a) cubes.add(v * v * v);
            return innov.eta * cubes.value();
        }
        CompensatedSum s;
        for (std::int64_t i = 0; i + h < len; ++i) {
            const double ai = a[static_cast<std::size_t>(i)];
            const double ah = a[static_cast<std::size_t>(i + h)];
            s.add(ai * ah * (ai + ah));
        }
        return innov.eta * s.value();
    }
    if (*h_prime < 1 || h < 1) throw std::invalid_argument("Delta(h, h') requires h >= 1 and h' >= 1");
    CompensatedSum s;
    for (std::int64_t i = 0; i + h + *h_prime < len; ++i) {
        s.add(a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i + h)] *
              a[static_cast<std::size_t>(i + h + *h_prime)]);
    }
    return innov.eta * s.value();
}

AnalyticConstants constants_for(double d, const process::InnovationSpec& innov, double m) {
    check_d(d);
    AnalyticConstants c;
    c.d = d;
    c.m = m;
    c.I2 = tail_integral(2, d);
    c.I3 = tail_integral(3, d);
    c.k = k_of_d(d, innov.eta, innov.sigma2);
    c.v = innov.sigma2 * m * m * (1.0 / (1.0 + 2.0 * d) + c.I2);
    return c;
}

}  // namespace lpskew::analytic
