// End-to-end checks of the command-line binary (path injected at build time).
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "actihmm/harness.hpp"
#include "actihmm/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "actihmm_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(ACTIHMM_BIN) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_config(const fs::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    out << doc.dump(2);
}

}  // namespace

TEST_CASE("simulate then fit produce the expected artifacts") {
    const auto dir = work_dir();
    const auto cfg = dir / "config.json";
    write_config(cfg, {{"case", "c"},
                       {"weeks", 1},
                       {"seed", 1},
                       {"fit", {{"max_iters", 8}}},
                       {"baseline_samples", 20}});

    REQUIRE(run("simulate --config " + cfg.string() + " --out " + (dir / "sim").string()) == 0);
    const auto y = actihmm::read_sequence(dir / "sim" / "y.txt");
    CHECK(y.size() == 1008);
    const auto x = actihmm::read_sequence(dir / "sim" / "x.txt");
    CHECK(x.size() == 1008);
    for (int v : x) CHECK((v >= 1 && v <= 3));

    SUBCASE("fit without truth omits the error columns") {
        REQUIRE(run("fit " + (dir / "sim" / "y.txt").string() + " --config " + cfg.string() +
                    " --out " + (dir / "fit").string()) == 0);
        const std::string csv = slurp(dir / "fit" / "errors.csv");
        CHECK(csv.substr(0, csv.find('\n')) == "iteration,loglik");
        const auto record = nlohmann::json::parse(slurp(dir / "fit" / "run.json"));
        CHECK(record.at("iterations_run").get<int>() >= 1);
    }

    SUBCASE("fit against explicit truth emits error columns deterministically") {
        nlohmann::json with_truth = nlohmann::json::parse(slurp(cfg));
        with_truth["truth"] =
            actihmm::params_to_json(actihmm::default_truth_params());
        const auto cfg2 = dir / "config_truth.json";
        write_config(cfg2, with_truth);

        REQUIRE(run("fit " + (dir / "sim" / "y.txt").string() + " --config " + cfg2.string() +
                    " --out " + (dir / "fit1").string()) == 0);
        REQUIRE(run("fit " + (dir / "sim" / "y.txt").string() + " --config " + cfg2.string() +
                    " --out " + (dir / "fit2").string()) == 0);
        const std::string csv1 = slurp(dir / "fit1" / "errors.csv");
        CHECK(csv1.substr(0, csv1.find('\n')) == "iteration,err_tau,err_eps,loglik");
        CHECK(csv1 == slurp(dir / "fit2" / "errors.csv"));
    }
}

TEST_CASE("simulation with frozen states emits one repeated symbol") {
    const auto dir = work_dir();
    const auto cfg = dir / "frozen.json";
    write_config(cfg, {{"weeks", 1},
                       {"seed", 3},
                       {"activity",
                        {{"f", {{"name", "constant"}}}, {"g", {{"name", "constant"}}}}}});
    // zero transition activity via an activity file of zeros
    {
        std::ofstream file(dir / "zeros.txt");
        for (int t = 1; t <= 1008; ++t) file << t << " 0.0\n";
    }
    nlohmann::json doc = nlohmann::json::parse(slurp(cfg));
    doc["activity"]["f"] = {{"file", (dir / "zeros.txt").string()}};
    write_config(cfg, doc);

    REQUIRE(run("simulate --config " + cfg.string() + " --out " + (dir / "frozen_out").string()) ==
            0);
    const auto y = actihmm::read_sequence(dir / "frozen_out" / "y.txt");
    int symbol = 0;
    for (int s : y)
        if (s != 0) {
            if (symbol == 0) symbol = s;
            CHECK(s == symbol);
        }
}

TEST_CASE("baseline command writes the estimates") {
    const auto dir = work_dir();
    const auto cfg = dir / "baseline.json";
    write_config(cfg, {{"case", "c"}, {"weeks", 1}, {"seed", 2}, {"baseline_samples", 50}});
    REQUIRE(run("baseline --config " + cfg.string() + " --out " + (dir / "base").string()) == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "base" / "baselines.json"));
    CHECK(doc.at("baseline_tau").get<double>() > 0.5);
    CHECK(doc.at("baseline_epsilon").get<double>() > 0.5);
}

TEST_CASE("experiment smoke run over two cases") {
    const auto dir = work_dir();
    const auto cfg = dir / "experiment.json";
    write_config(cfg, {{"weeks", 1},
                       {"seed", 5},
                       {"cases", {"c", "d"}},
                       {"fit", {{"max_iters", 5}}},
                       {"baseline_samples", 25}});
    REQUIRE(run("experiment --config " + cfg.string() + " --out " + (dir / "exp").string()) == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "exp" / "summary.json"));
    CHECK(summary.at("cases").size() == 2);
    CHECK(summary.at("cases").contains("c"));
    CHECK(fs::exists(dir / "exp" / "case_c" / "errors.csv"));
    CHECK(fs::exists(dir / "exp" / "case_d" / "run.json"));
    CHECK(summary.at("cases").at("c").at("final_err_tau").get<double>() >= 0.0);
}

TEST_CASE("invalid input yields a machine-readable error") {
    const auto dir = work_dir();
    const auto cfg = dir / "bad.json";
    nlohmann::json truth = actihmm::params_to_json(actihmm::default_truth_params());
    truth["pi"] = {0.5, 0.5, 0.1};  // not a distribution
    write_config(cfg, {{"case", "c"}, {"weeks", 1}, {"truth", truth}});

    const std::string cmd = std::string(ACTIHMM_BIN) + " simulate --config " + cfg.string() +
                            " --out " + (dir / "bad_out").string() + " 2> " +
                            (dir / "err.json").string() + " >/dev/null";
    CHECK(std::system(cmd.c_str()) != 0);
    const auto err = nlohmann::json::parse(slurp(dir / "err.json"));
    CHECK(err.at("error").at("type").get<std::string>() == "constraint_violation");
}
