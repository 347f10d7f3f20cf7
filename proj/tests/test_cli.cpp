#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lpskew_cli_test_" + std::to_string(::getpid()) + "_" +
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

    CliRun cli(const std::string& args) const {
        const fs::path out = file("stdout.capture");
        const fs::path err = file("stderr.capture");
        const std::string cmd = std::string("\"") + LPSKEW_CLI_PATH + "\" " + args + " > \"" +
                                out.string() + "\" 2> \"" + err.string() + "\"";
        const int status = std::system(cmd.c_str());
        CliRun run;
        run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        run.out = slurp(out);
        run.err = slurp(err);
        return run;
    }
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

const char* kFarimaSpec = R"({
  "schema_version": 1,
  "d": 0.2,
  "innovation": {"law": "centered_exponential", "rate": 1.0}
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analytic subcommand prints the limit constants") {
    TempDir dir;
    const auto run = dir.cli("analytic --d 0.2 --innovation exp:1");
    CHECK(run.exit_code == 0);
    const auto doc = json::parse(run.out);
    CHECK(doc.at("schema_version").get<int>() == 1);
    CHECK(doc.at("k").get<double>() == doctest::Approx(1.699688793771574).epsilon(1e-12));
    CHECK(doc.at("v").get<double>() == doctest::Approx(0.995088135903925).epsilon(1e-12));
    CHECK(doc.at("I2").get<double>() == doctest::Approx(0.1246072575861293).epsilon(1e-12));
}

TEST_CASE("simulate then estimate round trip") {
    TempDir dir;
    write_text(dir.file("spec.json"), kFarimaSpec);
    const auto sim = dir.cli("simulate --spec \"" + dir.file("spec.json").string() +
                             "\" --n 4096 --seed 5 --M 8192 --out \"" +
                             dir.file("path.csv").string() + "\" --meta \"" +
                             dir.file("meta.json").string() + "\"");
    CHECK(sim.exit_code == 0);

    const auto meta = json::parse(slurp(dir.file("meta.json")));
    CHECK(meta.at("generator").get<std::string>() == "lpskew-rng-v1");
    CHECK(meta.at("seed").get<std::uint64_t>() == 5);
    CHECK(meta.at("truncation_M").get<std::int64_t>() == 8192);
    CHECK(meta.at("spec_fingerprint").get<std::string>().size() == 16);

    const auto est = dir.cli("estimate --in \"" + dir.file("path.csv").string() + "\" --d 0.2");
    CHECK(est.exit_code == 0);
    const auto doc = json::parse(est.out);
    CHECK(doc.at("d_used").get<double>() == 0.2);
    CHECK(doc.at("d_source").get<std::string>() == "given");
    CHECK(doc.at("flagged").get<bool>() == false);
    CHECK(doc.at("k_hat").is_number());
    CHECK(doc.at("bandwidths").at("q0").get<int>() > 0);
}

TEST_CASE("binary output feeds back through format sniffing") {
    TempDir dir;
    write_text(dir.file("spec.json"), kFarimaSpec);
    const auto sim = dir.cli("simulate --spec \"" + dir.file("spec.json").string() +
                             "\" --n 512 --M 1024 --format binary --out \"" +
                             dir.file("path.bin").string() + "\"");
    CHECK(sim.exit_code == 0);
    const auto est = dir.cli("estimate --in \"" + dir.file("path.bin").string() + "\" --d 0.2");
    CHECK(est.exit_code == 0);
    CHECK(json::parse(est.out).at("n").get<int>() == 512);
}

TEST_CASE("estimated memory parameter is reported as such") {
    TempDir dir;
    write_text(dir.file("spec.json"), R"({"innovation": {"law": "gaussian", "sigma2": 1.0}})");
    dir.cli("simulate --spec \"" + dir.file("spec.json").string() + "\" --n 1024 --M 0 --out \"" +
            dir.file("wn.csv").string() + "\"");
    const auto est = dir.cli("estimate --in \"" + dir.file("wn.csv").string() + "\" --d auto");
    CHECK(est.exit_code == 0);
    const auto doc = json::parse(est.out);
    CHECK(doc.at("d_source").get<std::string>() == "estimated");
    CHECK(doc.at("d_used").get<double>() >= 0.0);
    CHECK(doc.at("d_used").get<double>() <= 0.499);
}

TEST_CASE("flagged estimates exit with the dedicated code") {
    TempDir dir;
    std::string csv = "x\n";
    for (int i = 0; i < 64; ++i) csv += "2.5\n";
    write_text(dir.file("flat.csv"), csv);
    const auto est = dir.cli("estimate --in \"" + dir.file("flat.csv").string() + "\" --d 0");
    CHECK(est.exit_code == 3);
    const auto doc = json::parse(est.out);
    CHECK(doc.at("flagged").get<bool>() == true);
    CHECK(doc.at("k_hat").is_null());
}

TEST_CASE("usage errors exit 1, data errors exit 2") {
    TempDir dir;
    CHECK(dir.cli("estimate --in nowhere.csv --d 0").exit_code == 2);
    CHECK(dir.cli("simulate --no-such-flag").exit_code == 1);
    CHECK(dir.cli("").exit_code == 1);
    CHECK(dir.cli("analytic --d 0.7").exit_code == 2);
    write_text(dir.file("spec.json"), kFarimaSpec);
    CHECK(dir.cli("simulate --spec \"" + dir.file("spec.json").string() +
                  "\" --n 16 --M 16 --format binary")
              .exit_code == 1);
    CHECK(dir.cli("simulate --spec \"" + dir.file("spec.json").string() +
                  "\" --n 16 --M 16 --format parquet")
              .exit_code == 1);
}

TEST_CASE("mc-table runs and is worker-count invariant") {
    TempDir dir;
    write_text(dir.file("cfg.json"), R"({
      "schema_version": 1,
      "spec": {"innovation": {"law": "centered_exponential", "rate": 1.0}},
      "sizes": [64, 128],
      "replications": 8,
      "base_seed": 3,
      "bandwidth_rule": "automatic",
      "d_mode": "known"
    })");
    const auto one = dir.cli("mc-table --config \"" + dir.file("cfg.json").string() +
                             "\" --workers 1");
    CHECK(one.exit_code == 0);
    CHECK(one.out.rfind("n,mse,mean_k_hat,k_true,excluded,mc_std_error\n", 0) == 0);

    const auto four = dir.cli("mc-table --config \"" + dir.file("cfg.json").string() +
                              "\" --workers 4");
    CHECK(four.exit_code == 0);
    CHECK(one.out == four.out);

    const auto asjson = dir.cli("mc-table --config \"" + dir.file("cfg.json").string() +
                                "\" --workers 2 --format json");
    CHECK(asjson.exit_code == 0);
    const auto doc = json::parse(asjson.out);
    CHECK(doc.at("schema_version").get<int>() == 1);
    CHECK(doc.at("rows").size() == 2);
}

TEST_CASE("worker count falls back to the environment variable") {
    TempDir dir;
    write_text(dir.file("cfg.json"), R"({
      "spec": {"innovation": {"law": "centered_exponential", "rate": 1.0}},
      "sizes": [64],
      "replications": 6
    })");
    const fs::path out = dir.file("stdout.capture");
    const std::string cmd = std::string("LPSKEW_WORKERS=2 \"") + LPSKEW_CLI_PATH +
                            "\" mc-table --config \"" + dir.file("cfg.json").string() +
                            "\" > \"" + out.string() + "\" 2> /dev/null";
    const int status = std::system(cmd.c_str());
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    const auto baseline = dir.cli("mc-table --config \"" + dir.file("cfg.json").string() +
                                  "\" --workers 1");
    CHECK(slurp(out) == baseline.out);
}

}
