#include "lpskew/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "lpskew/errors.hpp"
#include "lpskew/fft.hpp"
#include "lpskew/rng.hpp"
#include "lpskew/summation.hpp"

namespace lpskew::process {

InnovationSpec InnovationSpec::gaussian(double sigma2) {
    InnovationSpec s;
    s.law = Law::gaussian;
    s.sigma2 = sigma2;
    s.eta = 0.0;
    s.m4 = 3.0 * sigma2 * sigma2;
    s.m6 = 15.0 * sigma2 * sigma2 * sigma2;
    s.validate();
    return s;
}

InnovationSpec InnovationSpec::centered_exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
    InnovationSpec s;
    s.law = Law::centered_exponential;
    s.rate = rate;
    const double r2 = rate * rate;
    s.sigma2 = 1.0 / r2;
    s.eta = 2.0 / (r2 * rate);
    s.m4 = 9.0 / (r2 * r2);
    s.m6 = 265.0 / (r2 * r2 * r2);
    s.validate();
    return s;
}

InnovationSpec InnovationSpec::custom(double sigma2, double eta, double m4, double m6) {
    InnovationSpec s;
    s.law = Law::custom;
    s.sigma2 = sigma2;
    s.eta = eta;
    s.m4 = m4;
    s.m6 = m6;
    s.validate();
    return s;
}

void InnovationSpec::validate() const {
    if (!(sigma2 > 0.0)) throw ModelError("innovation variance must be positive");
    if (law == Law::gaussian && eta != 0.0) {
        throw ModelError("gaussian innovations must have zero third moment");
    }
    if (law == Law::centered_exponential) {
        if (!(rate > 0.0)) throw ModelError("exponential rate must be positive");
    }
}

void LinearProcessSpec::validate() const {
    if (!(d >= 0.0 && d < 0.5)) throw ModelError("memory parameter d must lie in [0, 0.5)");
    innovation.validate();
    if (!is_causal_ar(ar)) {
        throw ModelError("AR polynomial has a root inside or on the unit circle");
    }
    if (c_d_override && !(*c_d_override > 0.0)) {
        throw ModelError("c_d override must be positive");
    }
}

std::string LinearProcessSpec::fingerprint() const {
    // Hash a canonical rendering of every field that affects the law of the path.
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    auto feed = [&h](std::uint64_t v) { h = rng::mix64(h ^ v) + 0x9E3779B97F4A7C15ULL; };
    auto feed_double = [&](double x) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        feed(bits);
    };
    feed_double(mu);
    feed(ar.size());
    for (double v : ar) feed_double(v);
    feed(ma.size());
    for (double v : ma) feed_double(v);
    feed_double(d);
    feed(static_cast<std::uint64_t>(innovation.law));
    feed_double(innovation.sigma2);
    feed_double(innovation.eta);
    feed_double(innovation.m4);
    feed_double(innovation.m6);
    feed_double(innovation.rate);
    feed_double(c_d_override.value_or(0.0));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// ARMA impulse response psi_0..psi_K: psi_0 = 1, psi_j = theta_j + sum phi_k psi_{j-k}.
std::vector<double> arma_impulse(const std::vector<double>& ar, const std::vector<double>& ma,
                                 std::int64_t max_len) {
    const auto p = static_cast<std::int64_t>(ar.size());
    const auto q = static_cast<std::int64_t>(ma.size());
    std::vector<double> psi(static_cast<std::size_t>(max_len) + 1, 0.0);
    psi[0] = 1.0;
    for (std::int64_t j = 1; j <= max_len; ++j) {
        double s = (j <= q) ? ma[static_cast<std::size_t>(j - 1)] : 0.0;
        const std::int64_t kmax = std::min(j, p);
        for (std::int64_t k = 1; k <= kmax; ++k) {
            s += ar[static_cast<std::size_t>(k - 1)] * psi[static_cast<std::size_t>(j - k)];
        }
        psi[static_cast<std::size_t>(j)] = s;
    }
    return psi;
}

// Drop the numerically dead tail of a geometrically decaying impulse response.
void trim_relative(std::vector<double>& psi, double rel_tol) {
    double peak = 0.0;
    for (double v : psi) peak = std::max(peak, std::abs(v));
    std::size_t keep = psi.size();
    while (keep > 1 && std::abs(psi[keep - 1]) <= rel_tol * peak) --keep;
    psi.resize(keep);
}

std::vector<double> fractional_weights(double d, std::int64_t M) {
    std::vector<double> f(static_cast<std::size_t>(M) + 1);
    f[0] = 1.0;
    for (std::int64_t i = 1; i <= M; ++i) {
        f[static_cast<std::size_t>(i)] =
            f[static_cast<std::size_t>(i - 1)] * (static_cast<double>(i - 1) + d) / static_cast<double>(i);
    }
    return f;
}

double phi_at_one(const std::vector<double>& ar) {
    CompensatedSum s;
    s.add(1.0);
    for (double v : ar) s.add(-v);
    return s.value();
}

double theta_at_one(const std::vector<double>& ma) {
    CompensatedSum s;
    s.add(1.0);
    for (double v : ma) s.add(v);
    return s.value();
}

}  // namespace

MACoefficients expand_ma(const LinearProcessSpec& spec, std::int64_t M) {
    spec.validate();
    const auto pq = static_cast<std::int64_t>(std::max(spec.ar.size(), spec.ma.size()));
    if (M < pq) throw std::invalid_argument("truncation M must be at least max(p, q)");

    MACoefficients out;
    out.truncation_M = M;
    out.d = spec.d;

    if (spec.d == 0.0) {
        out.a = arma_impulse(spec.ar, spec.ma, M);
        // Geometric tail bound from the observed decay ratio near the cutoff.
        double ratio = 0.0;
        const std::size_t len = out.a.size();
        for (std::size_t i = std::max<std::size_t>(len > 8 ? len - 8 : 1, 1); i < len; ++i) {
            if (out.a[i - 1] != 0.0) {
                ratio = std::max(ratio, std::abs(out.a[i] / out.a[i - 1]));
            }
        }
        ratio = std::min(ratio, 0.999999);
        const double aM = out.a.back();
        out.tail_estimate = aM * aM * ratio * ratio / (1.0 - ratio * ratio);
        return out;
    }

    std::vector<double> frac = fractional_weights(spec.d, M);
    if (spec.ar.empty() && spec.ma.empty()) {
        out.a = std::move(frac);
    } else {
        std::vector<double> psi = arma_impulse(spec.ar, spec.ma, std::min<std::int64_t>(M, 4096));
        trim_relative(psi, 1e-16);
        std::vector<double> full = fft::convolve_direct(psi, frac);
        full.resize(static_cast<std::size_t>(M) + 1);
        out.a = std::move(full);
    }
    // Long-memory closed-form tail: sum_{i>M} a_i^2 ~ c(d)^2 M^{2d-1}/(1-2d).
    const double c = coefficient_sum_m(spec) * spec.d;
    out.tail_estimate = c * c * std::pow(static_cast<double>(M), 2.0 * spec.d - 1.0) / (1.0 - 2.0 * spec.d);
    return out;
}

double coefficient_sum_m(const LinearProcessSpec& spec) {
    const double phi1 = phi_at_one(spec.ar);
    const double theta1 = theta_at_one(spec.ma);
    if (phi1 == 0.0) throw ModelError("phi(1) = 0: singular AR polynomial");
    if (spec.d == 0.0) return theta1 / phi1;
    if (spec.c_d_override) return *spec.c_d_override / spec.d;
    // c(d)/d = theta(1)/(phi(1) Gamma(1+d)), continuous as d -> 0.
    return theta1 / (phi1 * std::tgamma(1.0 + spec.d));
}

std::int64_t choose_truncation(const LinearProcessSpec& spec, std::int64_t n, double tol) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const auto pq = static_cast<std::int64_t>(std::max(spec.ar.size(), spec.ma.size()));
    if (spec.d == 0.0 && spec.ar.empty() && spec.ma.empty()) return 0;

    std::int64_t M = std::max<std::int64_t>(pq, 16);
    for (int iter = 0; iter < 40; ++iter) {
        MACoefficients co = expand_ma(spec, M);
        CompensatedSum retained;
        for (double v : co.a) retained.add(v * v);
        if (co.tail_estimate <= tol * retained.value()) return M;
        if (M > (std::int64_t{1} << 31)) break;
        M *= 2;
    }
    throw ModelError("no truncation satisfying the tail tolerance was found");
}

std::vector<std::complex<double>> unit_series_poly_roots(const std::vector<double>& coeffs) {
    // Polynomial 1 - c_1 z - ... - c_k z^k with trailing zero coefficients dropped.
    std::size_t k = coeffs.size();
    while (k > 0 && coeffs[k - 1] == 0.0) --k;
    if (k == 0) return {};

    std::vector<std::complex<double>> poly(k + 1);
    poly[0] = 1.0;
    for (std::size_t i = 1; i <= k; ++i) poly[i] = -coeffs[i - 1];
    const std::complex<double> lead = poly[k];
    for (auto& c : poly) c /= lead;

    // Durand-Kerner from a deterministic non-real starting spiral.
    std::vector<std::complex<double>> roots(k);
    const std::complex<double> seed(0.4, 0.9);
    roots[0] = seed;
    for (std::size_t i = 1; i < k; ++i) roots[i] = roots[i - 1] * seed;

    auto eval = [&poly, k](std::complex<double> z) {
        std::complex<double> v = poly[k];
        for (std::size_t i = k; i-- > 0;) v = v * z + poly[i];
        return v;
    };

    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            const std::complex<double> delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14) break;
    }
    return roots;
}

bool is_causal_ar(const std::vector<double>& ar, double margin) {
    for (const auto& root : unit_series_poly_roots(ar)) {
        if (std::abs(root) <= 1.0 + margin) return false;
    }
    return true;
}

}  // namespace lpskew::process
