#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpskew/analytic.hpp"
#include "lpskew/errors.hpp"
#include "lpskew/estimators.hpp"
#include "lpskew/io.hpp"
#include "lpskew/montecarlo.hpp"
#include "lpskew/process.hpp"
#include "lpskew/rng.hpp"
#include "lpskew/simulate.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1;  // fixed default: runs stay reproducible without --seed

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataModel = 2;
constexpr int kExitFlagged = 3;

lpskew::process::InnovationSpec parse_innovation(const std::string& text) {
    const auto colon = text.find(':');
    const std::string law = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto split_doubles = [](const std::string& s) {
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const auto comma = s.find(',', pos);
            const std::string piece = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                               : comma - pos);
            if (piece.empty()) throw lpskew::DataError("empty innovation parameter");
            out.push_back(std::stod(piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return out;
    };
    if (law == "exp" || law == "centered_exponential") {
        const double rate = args.empty() ? 1.0 : std::stod(args);
        return lpskew::process::InnovationSpec::centered_exponential(rate);
    }
    if (law == "gaussian" || law == "normal") {
        const double sigma2 = args.empty() ? 1.0 : std::stod(args);
        return lpskew::process::InnovationSpec::gaussian(sigma2);
    }
    if (law == "custom") {
        const auto vals = split_doubles(args);
        if (vals.size() != 4) {
            throw lpskew::DataError("custom innovation needs sigma2,eta,m4,m6");
        }
        return lpskew::process::InnovationSpec::custom(vals[0], vals[1], vals[2], vals[3]);
    }
    throw lpskew::DataError("unknown innovation law: " + law +
                            " (expected exp[:rate], gaussian[:sigma2], custom:s2,eta,m4,m6)");
}

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw lpskew::DataError("cannot open for writing: " + out_path);
    out << content;
    if (!out) throw lpskew::DataError("write failed: " + out_path);
}

int resolve_workers(int flag_value, int config_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("LPSKEW_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return config_value;
}

struct SimulateArgs {
    std::string spec_path;
    std::int64_t n = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::int64_t M = -1;  // -1 = default policy
    std::string out_path;
    std::string format = "csv";
    std::string meta_path;
    std::string strategy = "auto";
};

int run_simulate(const SimulateArgs& args) {
    const auto spec = lpskew::io::spec_from_json(lpskew::io::load_json_file(args.spec_path));
    const std::int64_t M =
        args.M >= 0 ? args.M : lpskew::montecarlo::default_truncation(spec, args.n);
    lpskew::simulate::ConvolveStrategy strategy = lpskew::simulate::ConvolveStrategy::automatic;
    if (args.strategy == "direct") strategy = lpskew::simulate::ConvolveStrategy::direct;
    if (args.strategy == "fft") strategy = lpskew::simulate::ConvolveStrategy::fft;

    const auto path = lpskew::simulate::simulate_path(spec, args.n, args.seed, M, strategy);
    for (const auto& warning : path.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }

    if (args.format == "csv") {
        if (args.out_path.empty() || args.out_path == "-") {
            std::string buf = "x\n";
            char line[40];
            for (double v : path.x) {
                std::snprintf(line, sizeof(line), "%.17g\n", v);
                buf += line;
            }
            std::cout << buf;
        } else {
            lpskew::io::write_csv(args.out_path, path.x);
        }
    } else if (args.format == "binary") {
        if (args.out_path.empty() || args.out_path == "-") {
            std::cerr << "binary output requires --out\n";
            return kExitUsage;
        }
        lpskew::io::write_binary(args.out_path, path.x);
    } else {
        std::cerr << "unknown format: " << args.format << '\n';
        return kExitUsage;
    }

    if (!args.meta_path.empty()) {
        nlohmann::json meta = {{"schema_version", 1},
                               {"generator", lpskew::rng::kGeneratorVersion},
                               {"seed", args.seed},
                               {"n", args.n},
                               {"truncation_M", M},
                               {"truncation_M_defaulted", args.M < 0},
                               {"spec_fingerprint", path.spec_fingerprint.value_or("")},
                               {"warnings", path.warnings}};
        write_output(meta.dump(2) + "\n", args.meta_path);
    }
    return kExitOk;
}

struct EstimateArgs {
    std::string in_path;
    std::string d_text = "0";
    double gph_frac = 0.5;
    std::int64_t q0 = -1, q1 = -1, q2 = -1, q3 = -1;
    std::string out_path;
};

int run_estimate(const EstimateArgs& args) {
    const std::vector<double> x = lpskew::io::read_series(args.in_path);
    const auto n = static_cast<std::int64_t>(x.size());

    double d_used = 0.0;
    std::string d_source = "given";
    if (args.d_text == "auto") {
        d_used = lpskew::estimators::estimate_d_gph(x, args.gph_frac);
        d_source = "estimated";
    } else {
        d_used = std::stod(args.d_text);
    }

    lpskew::estimators::BandwidthPlan plan = lpskew::estimators::default_bandwidths(n, d_used);
    if (args.q0 > 0) plan.q0 = args.q0;
    if (args.q1 > 0) plan.q1 = args.q1;
    if (args.q2 > 0) plan.q2 = args.q2;
    if (args.q3 > 0) plan.q3 = args.q3;

    const auto est = lpskew::estimators::k_hat(x, d_used, plan);
    nlohmann::json doc = {{"schema_version", 1},
                          {"n", est.n},
                          {"d_used", est.d_used},
                          {"d_source", d_source},
                          {"s3_bar", est.s3_bar},
                          {"v_hat", est.v_hat},
                          {"flagged", est.flagged},
                          {"bandwidths",
                           {{"q0", est.bandwidths.q0},
                            {"q1", est.bandwidths.q1},
                            {"q2", est.bandwidths.q2},
                            {"q3", est.bandwidths.q3}}}};
    if (est.flagged) {
        doc["k_hat"] = nullptr;
    } else {
        doc["k_hat"] = est.k_hat;
    }
    write_output(doc.dump(2) + "\n", args.out_path);
    return est.flagged ? kExitFlagged : kExitOk;
}

struct AnalyticArgs {
    double d = 0.0;
    std::string innovation = "exp:1";
    std::string spec_path;
    std::string out_path;
};

int run_analytic(const AnalyticArgs& args) {
    lpskew::process::LinearProcessSpec spec;
    if (!args.spec_path.empty()) {
        spec = lpskew::io::spec_from_json(lpskew::io::load_json_file(args.spec_path));
        spec.d = args.d;
    } else {
        spec.d = args.d;
        spec.innovation = parse_innovation(args.innovation);
    }
    spec.validate();
    const double m = lpskew::process::coefficient_sum_m(spec);
    const auto constants = lpskew::analytic::constants_for(args.d, spec.innovation, m);
    nlohmann::json doc = {{"schema_version", 1},
                          {"d", constants.d},
                          {"m", constants.m},
                          {"I2", constants.I2},
                          {"I3", constants.I3},
                          {"k", constants.k},
                          {"v", constants.v},
                          {"sigma2", spec.innovation.sigma2},
                          {"eta", spec.innovation.eta}};
    write_output(doc.dump(2) + "\n", args.out_path);
    return kExitOk;
}

struct McTableArgs {
    std::string config_path;
    std::int64_t reps = -1;
    std::vector<std::int64_t> sizes;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string out_path;
    int workers = 0;
};

int run_mc_table(const McTableArgs& args) {
    auto config = lpskew::io::config_from_json(lpskew::io::load_json_file(args.config_path));
    if (args.reps > 0) config.replications = args.reps;
    if (!args.sizes.empty()) config.sizes = args.sizes;
    if (args.seed) config.base_seed = *args.seed;
    config.workers = resolve_workers(args.workers, config.workers);

    lpskew::montecarlo::TableFormat format = lpskew::montecarlo::TableFormat::csv;
    if (args.format == "json") {
        format = lpskew::montecarlo::TableFormat::json;
    } else if (args.format == "markdown") {
        format = lpskew::montecarlo::TableFormat::markdown;
    } else if (args.format != "csv") {
        std::cerr << "unknown format: " << args.format << '\n';
        return kExitUsage;
    }

    const auto rows = lpskew::montecarlo::run_experiment(config);
    write_output(lpskew::montecarlo::emit_table(rows, format), args.out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-process partial-sum skewness toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Generate a sample path of a linear process");
    sim->add_option("--spec", sim_args.spec_path, "Process spec JSON file")->required();
    sim->add_option("--n", sim_args.n, "Series length")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_args.seed, "RNG seed (default 1, fixed for reproducibility)");
    sim->add_option("--M", sim_args.M, "MA truncation (default: policy max(10n, 1e4) / tail certificate)");
    sim->add_option("--out", sim_args.out_path, "Output path (default stdout)");
    sim->add_option("--format", sim_args.format, "csv or binary (default csv)");
    sim->add_option("--meta", sim_args.meta_path, "Write a JSON metadata sidecar here");
    sim->add_option("--strategy", sim_args.strategy, "Convolution: auto, direct, or fft (default auto)");

    EstimateArgs est_args;
    auto* est = app.add_subcommand("estimate", "Estimate scaled skewness from a series file");
    est->add_option("--in", est_args.in_path, "Series file, CSV or binary")->required();
    est->add_option("--d", est_args.d_text, "Memory parameter, a number or 'auto' (default 0)");
    est->add_option("--gph-frac", est_args.gph_frac,
                    "Frequency-count exponent for --d auto (default 0.5)");
    est->add_option("--q0", est_args.q0, "Variance bandwidth (default: bandwidth rule)");
    est->add_option("--q1", est_args.q1, "Third-moment lag-0 bandwidth (default: bandwidth rule)");
    est->add_option("--q2", est_args.q2, "Third-moment lag bandwidth (default: bandwidth rule)");
    est->add_option("--q3", est_args.q3, "Third-moment lag-pair bandwidth (default: bandwidth rule)");
    est->add_option("--out", est_args.out_path, "Output path (default stdout)");

    AnalyticArgs ana_args;
    auto* ana = app.add_subcommand("analytic", "Print limit constants for a given d and innovation law");
    ana->add_option("--d", ana_args.d, "Memory parameter in [0, 0.5)")->required();
    ana->add_option("--innovation", ana_args.innovation,
                    "exp[:rate], gaussian[:sigma2], or custom:s2,eta,m4,m6 (default exp:1)");
    ana->add_option("--spec", ana_args.spec_path,
                    "Process spec JSON; its ARMA polynomials shape m(d), its innovation law is used");
    ana->add_option("--out", ana_args.out_path, "Output path (default stdout)");

    McTableArgs mc_args;
    auto* mc = app.add_subcommand("mc-table", "Run a replicated MSE experiment and print the table");
    mc->add_option("--config", mc_args.config_path, "Experiment config JSON file")->required();
    mc->add_option("--reps", mc_args.reps, "Override replication count");
    mc->add_option("--sizes", mc_args.sizes, "Override sample sizes")->delimiter(',');
    std::uint64_t seed_holder = 0;
    auto* seed_opt = mc->add_option("--seed", seed_holder, "Override base seed");
    mc->add_option("--format", mc_args.format, "csv, json, or markdown (default csv)");
    mc->add_option("--out", mc_args.out_path, "Output path (default stdout)");
    mc->add_option("--workers", mc_args.workers,
                   "Worker threads (default: LPSKEW_WORKERS env, then logical CPUs)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_args);
        if (est->parsed()) return run_estimate(est_args);
        if (ana->parsed()) return run_analytic(ana_args);
        if (mc->parsed()) {
            if (seed_opt->count() > 0) mc_args.seed = seed_holder;
            return run_mc_table(mc_args);
        }
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const lpskew::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataModel;
    } catch (const lpskew::ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataModel;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataModel;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataModel;
    }
}
