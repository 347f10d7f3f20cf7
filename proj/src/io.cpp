#include "lpskew/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpskew/errors.hpp"

namespace lpskew::io {

namespace {

constexpr char kMagic[8] = {'L', 'P', 'S', 'K', 'B', 'I', 'N', '1'};
constexpr int kSchemaVersion = 1;

void require_schema_version(const nlohmann::json& doc, const char* what) {
    if (doc.contains("schema_version") && doc.at("schema_version").get<int>() != kSchemaVersion) {
        throw DataError(std::string(what) + ": unsupported schema_version");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(const std::filesystem::path& path, std::span<const double> x) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << "x\n";
    for (double v : x) out << format_double(v) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

std::vector<double> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty series file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x") throw DataError("series CSV must start with an 'x' header line");
    std::vector<double> xs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || *end != '\0') {
            throw DataError("unparseable value at line " + std::to_string(lineno) + " of " +
                            path.string());
        }
        xs.push_back(v);
    }
    if (xs.empty()) throw DataError("series file holds no observations: " + path.string());
    return xs;
}

void write_binary(const std::filesystem::path& path, std::span<const double> x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t count = x.size();
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    out.write(reinterpret_cast<const char*>(x.data()),
              static_cast<std::streamsize>(x.size() * sizeof(double)));
    if (!out) throw DataError("write failed: " + path.string());
}

std::vector<double> read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError("bad magic: not a binary series file: " + path.string());
    }
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (in.gcount() != sizeof(count)) throw DataError("truncated header: " + path.string());
    std::vector<double> xs(count);
    in.read(reinterpret_cast<char*>(xs.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::uint64_t>(in.gcount()) != count * sizeof(double)) {
        throw DataError("truncated payload: " + path.string());
    }
    return xs;
}

std::vector<double> read_series(const std::filesystem::path& path) {
    {
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw DataError("cannot open: " + path.string());
        char magic[8];
        probe.read(magic, sizeof(magic));
        if (probe.gcount() == sizeof(magic) && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0) {
            return read_binary(path);
        }
    }
    return read_csv(path);
}

nlohmann::json spec_to_json(const process::LinearProcessSpec& spec) {
    nlohmann::json innov;
    switch (spec.innovation.law) {
        case process::InnovationSpec::Law::gaussian:
            innov = {{"law", "gaussian"}, {"sigma2", spec.innovation.sigma2}};
            break;
        case process::InnovationSpec::Law::centered_exponential:
            innov = {{"law", "centered_exponential"}, {"rate", spec.innovation.rate}};
            break;
        case process::InnovationSpec::Law::custom:
            innov = {{"law", "custom"},
                     {"sigma2", spec.innovation.sigma2},
                     {"eta", spec.innovation.eta},
                     {"m4", spec.innovation.m4},
                     {"m6", spec.innovation.m6}};
            break;
    }
    nlohmann::json doc = {{"schema_version", kSchemaVersion},
                          {"mu", spec.mu},
                          {"ar", spec.ar},
                          {"ma", spec.ma},
                          {"d", spec.d},
                          {"innovation", innov}};
    if (spec.c_d_override) doc["c_d"] = *spec.c_d_override;
    return doc;
}

process::LinearProcessSpec spec_from_json(const nlohmann::json& doc) {
    try {
        require_schema_version(doc, "process spec");
        process::LinearProcessSpec spec;
        spec.mu = doc.value("mu", 0.0);
        spec.ar = doc.value("ar", std::vector<double>{});
        spec.ma = doc.value("ma", std::vector<double>{});
        spec.d = doc.value("d", 0.0);
        const auto& innov = doc.at("innovation");
        const std::string law = innov.at("law").get<std::string>();
        if (law == "gaussian") {
            spec.innovation = process::InnovationSpec::gaussian(innov.value("sigma2", 1.0));
        } else if (law == "centered_exponential") {
            spec.innovation = process::InnovationSpec::centered_exponential(innov.at("rate").get<double>());
        } else if (law == "custom") {
            spec.innovation = process::InnovationSpec::custom(
                innov.at("sigma2").get<double>(), innov.at("eta").get<double>(),
                innov.at("m4").get<double>(), innov.at("m6").get<double>());
        } else {
            throw DataError("unknown innovation law: " + law);
        }
        if (doc.contains("c_d")) spec.c_d_override = doc.at("c_d").get<double>();
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed process spec JSON: ") + e.what());
    }
}

nlohmann::json config_to_json(const montecarlo::ExperimentConfig& config) {
    nlohmann::json doc = {{"schema_version", kSchemaVersion},
                          {"spec", spec_to_json(config.spec)},
                          {"sizes", config.sizes},
                          {"replications", config.replications},
                          {"base_seed", config.base_seed},
                          {"d_mode", config.d_mode == montecarlo::DMode::known ? "known" : "estimated"},
                          {"gph_frac", config.gph_frac},
                          {"workers", config.workers}};
    if (config.bandwidth_rule == montecarlo::BandwidthRule::automatic) {
        doc["bandwidth_rule"] = "automatic";
    } else {
        doc["bandwidth_rule"] = "explicit";
        nlohmann::json plans;
        for (const auto& [n, plan] : config.plans) {
            plans[std::to_string(n)] = {
                {"q0", plan.q0}, {"q1", plan.q1}, {"q2", plan.q2}, {"q3", plan.q3}};
        }
        doc["plans"] = plans;
    }
    if (config.truncation_M) doc["truncation_M"] = *config.truncation_M;
    return doc;
}

montecarlo::ExperimentConfig config_from_json(const nlohmann::json& doc) {
    try {
        require_schema_version(doc, "experiment config");
        montecarlo::ExperimentConfig config;
        config.spec = spec_from_json(doc.at("spec"));
        config.sizes = doc.at("sizes").get<std::vector<std::int64_t>>();
        config.replications = doc.value("replications", std::int64_t{200});
        config.base_seed = doc.value("base_seed", std::uint64_t{1});
        const std::string rule = doc.value("bandwidth_rule", std::string("automatic"));
        if (rule == "automatic") {
            config.bandwidth_rule = montecarlo::BandwidthRule::automatic;
        } else if (rule == "explicit") {
            config.bandwidth_rule = montecarlo::BandwidthRule::explicit_plan;
            for (const auto& [key, val] : doc.at("plans").items()) {
                estimators::BandwidthPlan plan;
                plan.q0 = val.at("q0").get<std::int64_t>();
                plan.q1 = val.at("q1").get<std::int64_t>();
                plan.q2 = val.at("q2").get<std::int64_t>();
                plan.q3 = val.at("q3").get<std::int64_t>();
                config.plans[std::stoll(key)] = plan;
            }
        } else {
            throw DataError("unknown bandwidth_rule: " + rule);
        }
        const std::string mode = doc.value("d_mode", std::string("known"));
        if (mode == "known") {
            config.d_mode = montecarlo::DMode::known;
        } else if (mode == "estimated") {
            config.d_mode = montecarlo::DMode::estimated;
        } else {
            throw DataError("unknown d_mode: " + mode);
        }
        config.gph_frac = doc.value("gph_frac", 0.5);
        if (doc.contains("truncation_M") && !doc.at("truncation_M").is_null()) {
            config.truncation_M = doc.at("truncation_M").get<std::int64_t>();
        }
        config.workers = doc.value("workers", 0);
        config.validate();
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed experiment config JSON: ") + e.what());
    }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace lpskew::io
