#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpskew/estimators.hpp"
#include "lpskew/process.hpp"

namespace lpskew::montecarlo {

enum class BandwidthRule { automatic, explicit_plan };
enum class DMode { known, estimated };

struct ExperimentConfig {
    process::LinearProcessSpec spec;
    std::vector<std::int64_t> sizes;
    std::int64_t replications = 200;
    std::uint64_t base_seed = 1;
    BandwidthRule bandwidth_rule = BandwidthRule::automatic;
    std::map<std::int64_t, estimators::BandwidthPlan> plans;  // per size, explicit rule only
    DMode d_mode = DMode::known;
    double gph_frac = 0.5;
    std::optional<std::int64_t> truncation_M;  // overrides the default policy
    int workers = 0;                           // 0 = hardware concurrency

    void validate() const;
};

struct MseRow {
    std::int64_t n = 0;
    double mse = 0.0;
    double mean_k_hat = 0.0;
    double k_true = 0.0;
    std::int64_t excluded = 0;
    double mc_std_error = 0.0;  // standard error of mean_k_hat across valid replications
};

// Seed for replication b of the size-n experiment; fixed-order hash chain so
// the assignment is independent of worker scheduling.
std::uint64_t replication_seed(std::uint64_t base_seed, std::int64_t n, std::int64_t b);

// Default truncation policy: max(10n, 10^4) for long memory, tail-certified
// geometric cutoff for short memory.
std::int64_t default_truncation(const process::LinearProcessSpec& spec, std::int64_t n);

// Replicated simulate->estimate runs; one row per size. Deterministic for a
// given config regardless of worker count.
std::vector<MseRow> run_experiment(const ExperimentConfig& config);

enum class TableFormat { csv, json, markdown };

std::string emit_table(std::span<const MseRow> rows, TableFormat format);

}  // namespace lpskew::montecarlo
