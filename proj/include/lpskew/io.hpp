#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpskew/montecarlo.hpp"
#include "lpskew/process.hpp"

namespace lpskew::io {

// CSV series format: a single "x" header line, one value per row.
void write_csv(const std::filesystem::path& path, std::span<const double> x);
std::vector<double> read_csv(const std::filesystem::path& path);

// Binary series format: magic "LPSKBIN1", little-endian u64 count, then
// count little-endian IEEE f64 values.
void write_binary(const std::filesystem::path& path, std::span<const double> x);
std::vector<double> read_binary(const std::filesystem::path& path);

// Reads either format, sniffing the magic bytes.
std::vector<double> read_series(const std::filesystem::path& path);

nlohmann::json spec_to_json(const process::LinearProcessSpec& spec);
process::LinearProcessSpec spec_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const montecarlo::ExperimentConfig& config);
montecarlo::ExperimentConfig config_from_json(const nlohmann::json& doc);

nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace lpskew::io
