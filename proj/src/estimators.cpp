#include "lpskew/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lpskew/errors.hpp"
#include "lpskew/summation.hpp"

namespace lpskew::estimators {

namespace {

double series_mean(std::span<const double> x) {
    CompensatedSum s;
    for (double v : x) s.add(v);
    return s.value() / static_cast<double>(x.size());
}

void check_lag(std::span<const double> x, std::int64_t h) {
    if (x.empty()) throw std::invalid_argument("series must be nonempty");
    if (h < 0 || h >= static_cast<std::int64_t>(x.size())) {
        throw std::invalid_argument("lag must satisfy 0 <= h < n");
    }
}

void check_d(double d) {
    if (!(d >= 0.0 && d < 0.5)) throw std::domain_error("d must lie in [0, 0.5)");
}

}  // namespace

void BandwidthPlan::validate(std::int64_t n) const {
    if (q0 < 1 || q1 < 1 || q2 < 1 || q3 < 2) {
        throw std::invalid_argument("bandwidths require q0,q1,q2 >= 1 and q3 >= 2");
    }
    if (q0 >= n || q1 >= n || q2 >= n || q3 >= n) {
        throw std::invalid_argument("bandwidths must be smaller than the series length");
    }
}

double sample_autocov(std::span<const double> x, std::int64_t h) {
    check_lag(x, h);
    const auto n = static_cast<std::int64_t>(x.size());
    const double mean = series_mean(x);
    CompensatedSum s;
    for (std::int64_t j = 0; j + h < n; ++j) {
        s.add((x[static_cast<std::size_t>(j)] - mean) * (x[static_cast<std::size_t>(j + h)] - mean));
    }
    return s.value() / static_cast<double>(n);
}

double long_run_variance(std::span<const double> x, double d, std::int64_t q0) {
    check_d(d);
    const auto n = static_cast<std::int64_t>(x.size());
    if (q0 < 1 || q0 >= n) throw std::invalid_argument("q0 must satisfy 1 <= q0 < n");
    const double mean = series_mean(x);
    const double q = static_cast<double>(q0);
    CompensatedSum total;
    {
        CompensatedSum g0;
        for (double v : x) g0.add((v - mean) * (v - mean));
        total.add(g0.value() / static_cast<double>(n));
    }
    for (std::int64_t h = 1; h <= q0; ++h) {
        CompensatedSum gh;
        for (std::int64_t j = 0; j + h < n; ++j) {
            gh.add((x[static_cast<std::size_t>(j)] - mean) * (x[static_cast<std::size_t>(j + h)] - mean));
        }
        const double taper = 1.0 - static_cast<double>(h) / q;
        total.add(2.0 * taper * gh.value() / static_cast<double>(n));
    }
    return std::pow(q, -2.0 * d) * total.value();
}

double delta_bar(std::span<const double> x, std::int64_t h) {
    check_lag(x, h);
    const auto n = static_cast<std::int64_t>(x.size());
    const double mean = series_mean(x);
    CompensatedSum s;
    if (h == 0) {
        for (double v : x) {
            const double c = v - mean;
            s.add(c * c * c);
        }
    } else {
        for (std::int64_t j = 0; j + h < n; ++j) {
            const double u = x[static_cast<std::size_t>(j)] - mean;
            const double w = x[static_cast<std::size_t>(j + h)] - mean;
            s.add(u * w * (u + w));
        }
    }
    return s.value() / static_cast<double>(n);
}

double delta_bar2(std::span<const double> x, std::int64_t h, std::int64_t h_prime) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (h < 1 || h_prime < 1) throw std::invalid_argument("delta_bar2 requires h >= 1 and h' >= 1");
    if (h + h_prime >= n) throw std::invalid_argument("h + h' must be smaller than the series length");
    const double mean = series_mean(x);
    CompensatedSum s;
    for (std::int64_t j = 0; j + h + h_prime < n; ++j) {
        s.add((x[static_cast<std::size_t>(j)] - mean) * (x[static_cast<std::size_t>(j + h)] - mean) *
              (x[static_cast<std::size_t>(j + h + h_prime)] - mean));
    }
    return s.value() / static_cast<double>(n);
}

double s3_bar(std::span<const double> x, double d, const BandwidthPlan& plan) {
    check_d(d);
    plan.validate(static_cast<std::int64_t>(x.size()));
    const double q1 = static_cast<double>(plan.q1);
    const double q2 = static_cast<double>(plan.q2);
    const double q3 = static_cast<double>(plan.q3);

    CompensatedSum result;
    result.add(std::pow(q1, -3.0 * d) * delta_bar(x, 0));

    CompensatedSum lag_sum;
    for (std::int64_t h = 1; h <= plan.q2; ++h) {
        const double taper = 1.0 - static_cast<double>(h) / q2;
        if (taper <= 0.0) continue;
        lag_sum.add(taper * delta_bar(x, h));
    }
    result.add(3.0 * std::pow(q2, -3.0 * d) * lag_sum.value());

    CompensatedSum pair_sum;
    for (std::int64_t h = 1; h <= plan.q3 - 1; ++h) {
        for (std::int64_t hp = 1; hp <= plan.q3 - h; ++hp) {
            const double taper = 1.0 - static_cast<double>(h + hp) / q3;
            if (taper <= 0.0) continue;
            pair_sum.add(taper * delta_bar2(x, h, hp));
        }
    }
    result.add(6.0 * std::pow(q3, -3.0 * d) * pair_sum.value());
    return result.value();
}

SkewEstimate k_hat(std::span<const double> x, double d, const BandwidthPlan& plan) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (n < 8) throw std::invalid_argument("k_hat requires a series of length >= 8");
    SkewEstimate est;
    est.d_used = d;
    est.bandwidths = plan;
    est.n = n;
    est.s3_bar = s3_bar(x, d, plan);
    est.v_hat = long_run_variance(x, d, plan.q0);
    if (est.v_hat > 0.0) {
        est.k_hat = est.s3_bar / (est.v_hat * std::sqrt(est.v_hat));
        est.flagged = false;
    } else {
        est.k_hat = std::numeric_limits<double>::quiet_NaN();
        est.flagged = true;
    }
    return est;
}

std::int64_t ceil_power(std::int64_t n, double exponent) {
    const double v = std::pow(static_cast<double>(n), exponent);
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9 * std::max(1.0, std::abs(r))) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

BandwidthPlan default_bandwidths(std::int64_t n, double d) {
    check_d(d);
    if (n < 8) throw std::invalid_argument("bandwidth rule requires n >= 8");
    BandwidthPlan plan;
    if (d > 0.0) {
        plan.q1 = plan.q2 = ceil_power(n, 0.2);
        plan.q3 = std::max<std::int64_t>(2, ceil_power(n, 0.1));
        plan.q0 = ceil_power(n, 0.5 - d);
    } else {
        const std::int64_t q = ceil_power(n, 0.33);
        plan.q0 = plan.q1 = plan.q2 = q;
        plan.q3 = std::max<std::int64_t>(2, q);
    }
    return plan;
}

double estimate_d_gph(std::span<const double> x, double bandwidth_frac) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (n < 64) throw std::invalid_argument("log-periodogram estimation requires n >= 64");
    if (!(bandwidth_frac > 0.0 && bandwidth_frac <= 0.8)) {
        throw std::invalid_argument("bandwidth_frac must lie in (0, 0.8]");
    }
    const double mean = series_mean(x);
    const std::int64_t m = std::min<std::int64_t>(ceil_power(n, bandwidth_frac), n / 2);

    std::vector<double> logI(static_cast<std::size_t>(m));
    std::vector<double> z(static_cast<std::size_t>(m));
    for (std::int64_t j = 1; j <= m; ++j) {
        const double omega = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        // Goertzel recurrence for the DFT at omega.
        const double c = 2.0 * std::cos(omega);
        double s_prev = 0.0, s_prev2 = 0.0;
        for (std::int64_t t = 0; t < n; ++t) {
            const double s = (x[static_cast<std::size_t>(t)] - mean) + c * s_prev - s_prev2;
            s_prev2 = s_prev;
            s_prev = s;
        }
        const double re = s_prev - s_prev2 * std::cos(omega);
        const double im = s_prev2 * std::sin(omega);
        const double power = (re * re + im * im) / (2.0 * std::numbers::pi * static_cast<double>(n));
        if (!(power > 0.0) || !std::isfinite(power)) {
            throw DataError("degenerate series: nonpositive periodogram ordinate");
        }
        logI[static_cast<std::size_t>(j - 1)] = std::log(power);
        z[static_cast<std::size_t>(j - 1)] = -2.0 * std::log(std::abs(2.0 * std::sin(0.5 * omega)));
    }

    const double zbar = series_mean(z);
    const double ybar = series_mean(logI);
    CompensatedSum szz, szy;
    for (std::int64_t j = 0; j < m; ++j) {
        const double dz = z[static_cast<std::size_t>(j)] - zbar;
        szz.add(dz * dz);
        szy.add(dz * (logI[static_cast<std::size_t>(j)] - ybar));
    }
    if (szz.value() <= 0.0) throw DataError("degenerate regressor in log-periodogram fit");
    const double slope = szy.value() / szz.value();
    return std::clamp(slope, 0.0, 0.499);
}

}  // namespace lpskew::estimators
