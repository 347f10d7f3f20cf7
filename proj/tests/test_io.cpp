#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "lpskew/errors.hpp"
#include "lpskew/io.hpp"
#include "lpskew/montecarlo.hpp"
#include "lpskew/process.hpp"

using namespace lpskew;
namespace fs = std::filesystem;
using process::InnovationSpec;
using process::LinearProcessSpec;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lpskew_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path file(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv series round trip preserves every bit") {
    TempDir dir;
    const std::vector<double> x = {0.1, -3.5, 1e-17, 12345.678901234567, -0.0, 2e300};
    const auto p = dir.file("series.csv");
    io::write_csv(p, x);
    const auto back = io::read_csv(p);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == x[i]);
}

TEST_CASE("binary series round trip preserves every bit") {
    TempDir dir;
    const std::vector<double> x = {0.1, -3.5, 1e-308, 9.87e250, 0.0};
    const auto p = dir.file("series.bin");
    io::write_binary(p, x);
    const auto back = io::read_binary(p);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == x[i]);
}

TEST_CASE("read_series sniffs the format") {
    TempDir dir;
    const std::vector<double> x = {1.5, 2.5, -4.0};
    io::write_csv(dir.file("a.csv"), x);
    io::write_binary(dir.file("a.bin"), x);
    CHECK(io::read_series(dir.file("a.csv")) == x);
    CHECK(io::read_series(dir.file("a.bin")) == x);
}

TEST_CASE("csv reader tolerates trailing carriage returns") {
    TempDir dir;
    write_text(dir.file("crlf.csv"), "x\r\n1.5\r\n-2.5\r\n");
    const auto back = io::read_csv(dir.file("crlf.csv"));
    REQUIRE(back.size() == 2);
    CHECK(back[0] == 1.5);
    CHECK(back[1] == -2.5);
}

TEST_CASE("malformed series files are rejected with DataError") {
    TempDir dir;
    CHECK_THROWS_AS(io::read_csv(dir.file("missing.csv")), DataError);

    write_text(dir.file("empty.csv"), "");
    CHECK_THROWS_AS(io::read_csv(dir.file("empty.csv")), DataError);

    write_text(dir.file("badheader.csv"), "value\n1.0\n");
    CHECK_THROWS_AS(io::read_csv(dir.file("badheader.csv")), DataError);

    write_text(dir.file("headeronly.csv"), "x\n");
    CHECK_THROWS_AS(io::read_csv(dir.file("headeronly.csv")), DataError);

    write_text(dir.file("garbage.csv"), "x\n1.0\nnot-a-number\n");
    CHECK_THROWS_AS(io::read_csv(dir.file("garbage.csv")), DataError);

    write_text(dir.file("badmagic.bin"), "NOTMAGIC\x01\x00\x00\x00\x00\x00\x00\x00");
    CHECK_THROWS_AS(io::read_binary(dir.file("badmagic.bin")), DataError);

    write_text(dir.file("short.bin"), std::string("LPSKBIN1") +
                                          std::string("\x03\x00\x00\x00\x00\x00\x00\x00", 8) +
                                          std::string(8, '\0'));
    CHECK_THROWS_AS(io::read_binary(dir.file("short.bin")), DataError);
}

TEST_CASE("process spec json round trip") {
    LinearProcessSpec spec;
    spec.mu = 1.5;
    spec.ar = {0.5, -0.2};
    spec.ma = {0.3};
    spec.d = 0.25;
    spec.innovation = InnovationSpec::centered_exponential(2.0);
    spec.c_d_override = 0.8;

    const auto back = io::spec_from_json(io::spec_to_json(spec));
    CHECK(back.mu == spec.mu);
    CHECK(back.ar == spec.ar);
    CHECK(back.ma == spec.ma);
    CHECK(back.d == spec.d);
    CHECK(back.innovation.law == InnovationSpec::Law::centered_exponential);
    CHECK(back.innovation.rate == 2.0);
    CHECK(back.innovation.sigma2 == doctest::Approx(0.25));
    REQUIRE(back.c_d_override.has_value());
    CHECK(*back.c_d_override == 0.8);

    LinearProcessSpec g;
    g.innovation = InnovationSpec::gaussian(3.0);
    const auto gband = io::spec_from_json(io::spec_to_json(g));
    CHECK(gband.innovation.law == InnovationSpec::Law::gaussian);
    CHECK(gband.innovation.sigma2 == 3.0);
    CHECK_FALSE(gband.c_d_override.has_value());

    LinearProcessSpec c;
    c.innovation = InnovationSpec::custom(1.0, -2.0, 9.0, 265.0);
    const auto cback = io::spec_from_json(io::spec_to_json(c));
    CHECK(cback.innovation.law == InnovationSpec::Law::custom);
    CHECK(cback.innovation.eta == -2.0);
    CHECK(cback.innovation.m6 == 265.0);
}

TEST_CASE("spec json rejects unusable documents") {
    CHECK_THROWS_AS(io::spec_from_json(nlohmann::json{{"mu", 0.0}}), DataError);
    CHECK_THROWS_AS(io::spec_from_json(nlohmann::json{
                        {"innovation", {{"law", "cauchy"}}},
                    }),
                    DataError);
    CHECK_THROWS_AS(io::spec_from_json(nlohmann::json{
                        {"schema_version", 99},
                        {"innovation", {{"law", "gaussian"}}},
                    }),
                    DataError);
    // missing schema_version is tolerated
    CHECK_NOTHROW(io::spec_from_json(nlohmann::json{
        {"innovation", {{"law", "gaussian"}, {"sigma2", 1.0}}},
    }));
}

TEST_CASE("experiment config json round trip") {
    montecarlo::ExperimentConfig cfg;
    cfg.spec.d = 0.2;
    cfg.spec.innovation = InnovationSpec::centered_exponential(1.0);
    cfg.sizes = {200, 1000};
    cfg.replications = 50;
    cfg.base_seed = 31;
    cfg.bandwidth_rule = montecarlo::BandwidthRule::explicit_plan;
    cfg.plans[200] = estimators::BandwidthPlan{9, 3, 3, 2};
    cfg.plans[1000] = estimators::BandwidthPlan{14, 4, 4, 2};
    cfg.d_mode = montecarlo::DMode::estimated;
    cfg.gph_frac = 0.4;
    cfg.truncation_M = 12345;
    cfg.workers = 2;

    const auto back = io::config_from_json(io::config_to_json(cfg));
    CHECK(back.spec.d == 0.2);
    CHECK(back.sizes == cfg.sizes);
    CHECK(back.replications == 50);
    CHECK(back.base_seed == 31);
    CHECK(back.bandwidth_rule == montecarlo::BandwidthRule::explicit_plan);
    REQUIRE(back.plans.count(200) == 1);
    CHECK(back.plans.at(200).q0 == 9);
    CHECK(back.plans.at(1000).q2 == 4);
    CHECK(back.d_mode == montecarlo::DMode::estimated);
    CHECK(back.gph_frac == 0.4);
    REQUIRE(back.truncation_M.has_value());
    CHECK(*back.truncation_M == 12345);
    CHECK(back.workers == 2);

    montecarlo::ExperimentConfig plain;
    plain.spec.innovation = InnovationSpec::centered_exponential(1.0);
    plain.sizes = {100};
    const auto pback = io::config_from_json(io::config_to_json(plain));
    CHECK(pback.bandwidth_rule == montecarlo::BandwidthRule::automatic);
    CHECK(pback.d_mode == montecarlo::DMode::known);
    CHECK_FALSE(pback.truncation_M.has_value());
}

TEST_CASE("config json rejects unknown enum strings") {
    auto doc = io::config_to_json([] {
        montecarlo::ExperimentConfig cfg;
        cfg.spec.innovation = InnovationSpec::gaussian(1.0);
        cfg.sizes = {100};
        return cfg;
    }());
    doc["bandwidth_rule"] = "freestyle";
    CHECK_THROWS_AS(io::config_from_json(doc), DataError);
    doc["bandwidth_rule"] = "automatic";
    doc["d_mode"] = "psychic";
    CHECK_THROWS_AS(io::config_from_json(doc), DataError);
}

TEST_CASE("load_json_file reports missing and invalid files") {
    TempDir dir;
    CHECK_THROWS_AS(io::load_json_file(dir.file("absent.json")), DataError);
    write_text(dir.file("broken.json"), "{ not json");
    CHECK_THROWS_AS(io::load_json_file(dir.file("broken.json")), DataError);
    write_text(dir.file("ok.json"), "{\"a\": 1}");
    CHECK(io::load_json_file(dir.file("ok.json")).at("a").get<int>() == 1);
}

}
