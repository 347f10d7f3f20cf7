#include "lpskew/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "lpskew/analytic.hpp"
#include "lpskew/errors.hpp"
#include "lpskew/rng.hpp"
#include "lpskew/simulate.hpp"
#include "lpskew/summation.hpp"

#include <json.hpp>

namespace lpskew::montecarlo {

void ExperimentConfig::validate() const {
    spec.validate();
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (sizes.empty()) throw std::invalid_argument("sizes must be nonempty");
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sizes must be strictly increasing");
    }
    if (sizes.front() < 8) throw std::invalid_argument("sizes must be >= 8");
    if (bandwidth_rule == BandwidthRule::explicit_plan) {
        for (std::int64_t n : sizes) {
            if (!plans.contains(n)) {
                throw std::invalid_argument("explicit bandwidth rule needs a plan for every size");
            }
        }
    }
    if (!(gph_frac > 0.0 && gph_frac <= 0.8)) throw std::invalid_argument("gph_frac must lie in (0, 0.8]");
    if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::int64_t n, std::int64_t b) {
    return rng::derive_stream_seed(base_seed, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(b));
}

std::int64_t default_truncation(const process::LinearProcessSpec& spec, std::int64_t n) {
    if (spec.d > 0.0) return std::max<std::int64_t>(10 * n, 10000);
    return process::choose_truncation(spec, n, 1e-12);
}

namespace {

void enforce_growth_contract(const estimators::BandwidthPlan& plan, std::int64_t n) {
    if (plan.q1 * plan.q1 >= n || plan.q2 * plan.q2 >= n || plan.q3 * plan.q3 >= n) {
        throw std::invalid_argument("bandwidth growth contract violated: q_i^2 must stay below n");
    }
    if (plan.q0 >= n) {
        throw std::invalid_argument("bandwidth growth contract violated: q0 must stay below n");
    }
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct ReplicationResult {
    double k_hat = std::numeric_limits<double>::quiet_NaN();
    bool flagged = true;
};

}  // namespace

std::vector<MseRow> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto moments = simulate::innovation_moments(config.spec.innovation);
    const double k_true = analytic::k_of_d(config.spec.d, moments.eta, moments.sigma2);
    const int workers = resolve_workers(config.workers);

    std::vector<MseRow> rows;
    rows.reserve(config.sizes.size());
    for (const std::int64_t n : config.sizes) {
        if (config.bandwidth_rule == BandwidthRule::automatic) {
            enforce_growth_contract(estimators::default_bandwidths(n, config.spec.d), n);
        } else {
            enforce_growth_contract(config.plans.at(n), n);
        }
        const std::int64_t M = config.truncation_M.value_or(default_truncation(config.spec, n));
        const simulate::PreparedSimulator sim(config.spec, n, M);

        const std::int64_t B = config.replications;
        std::vector<ReplicationResult> results(static_cast<std::size_t>(B));
        std::atomic<std::int64_t> next{0};

        auto worker = [&]() {
            for (;;) {
                const std::int64_t b = next.fetch_add(1);
                if (b >= B) break;
                const std::uint64_t seed = replication_seed(config.base_seed, n, b);
                const simulate::SamplePath path = sim.run(seed);
                ReplicationResult& slot = results[static_cast<std::size_t>(b)];
                try {
                    double d_used = config.spec.d;
                    if (config.d_mode == DMode::estimated) {
                        d_used = estimators::estimate_d_gph(path.x, config.gph_frac);
                    }
                    const estimators::BandwidthPlan plan =
                        config.bandwidth_rule == BandwidthRule::automatic
                            ? estimators::default_bandwidths(n, d_used)
                            : config.plans.at(n);
                    const estimators::SkewEstimate est = estimators::k_hat(path.x, d_used, plan);
                    slot.k_hat = est.k_hat;
                    slot.flagged = est.flagged;
                } catch (const DataError&) {
                    slot.flagged = true;
                }
            }
        };

        if (workers == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        // Fixed-order reduction over replication index keeps rows bit-stable
        // across worker counts.
        CompensatedSum sum_k, sum_sq_err;
        std::int64_t valid = 0;
        for (const auto& r : results) {
            if (r.flagged) continue;
            ++valid;
            sum_k.add(r.k_hat);
            const double err = r.k_hat - k_true;
            sum_sq_err.add(err * err);
        }
        if (valid == 0) {
            throw DataError("all replications were flagged at n = " + std::to_string(n));
        }
        MseRow row;
        row.n = n;
        row.k_true = k_true;
        row.excluded = B - valid;
        row.mse = sum_sq_err.value() / static_cast<double>(valid);
        row.mean_k_hat = sum_k.value() / static_cast<double>(valid);
        if (valid >= 2) {
            CompensatedSum centered;
            for (const auto& r : results) {
                if (r.flagged) continue;
                const double dev = r.k_hat - row.mean_k_hat;
                centered.add(dev * dev);
            }
            const double sample_var = centered.value() / static_cast<double>(valid - 1);
            row.mc_std_error = std::sqrt(sample_var / static_cast<double>(valid));
        } else {
            row.mc_std_error = 0.0;
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string emit_table(std::span<const MseRow> rows, TableFormat format) {
    if (rows.empty()) throw std::invalid_argument("cannot emit an empty table");
    switch (format) {
        case TableFormat::csv: {
            std::string out = "n,mse,mean_k_hat,k_true,excluded,mc_std_error\n";
            for (const auto& r : rows) {
                out += std::to_string(r.n) + ',' + format_double(r.mse) + ',' +
                       format_double(r.mean_k_hat) + ',' + format_double(r.k_true) + ',' +
                       std::to_string(r.excluded) + ',' + format_double(r.mc_std_error) + '\n';
            }
            return out;
        }
        case TableFormat::json: {
            nlohmann::json doc;
            doc["schema_version"] = 1;
            doc["rows"] = nlohmann::json::array();
            for (const auto& r : rows) {
                doc["rows"].push_back({{"n", r.n},
                                       {"mse", r.mse},
                                       {"mean_k_hat", r.mean_k_hat},
                                       {"k_true", r.k_true},
                                       {"excluded", r.excluded},
                                       {"mc_std_error", r.mc_std_error}});
            }
            return doc.dump(2) + "\n";
        }
        case TableFormat::markdown: {
            std::string out = "| n | MSE |\n| ---: | ---: |\n";
            for (const auto& r : rows) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.4f", r.mse);
                out += "| " + std::to_string(r.n) + " | " + buf + " |\n";
            }
            return out;
        }
    }
    throw std::invalid_argument("unknown table format");
}

}  // namespace lpskew::montecarlo
