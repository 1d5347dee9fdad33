#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlohmann/json.hpp"

#include "fit_util.hpp"
#include "gravosc/entanglement.hpp"
#include "gravosc/model.hpp"
#include "gravosc/observables.hpp"

using namespace gravosc;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("GRAVOSC_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "GRAVOSC_CLI must point at the built binary");
    const std::string err_path = "cli_stderr.tmp";
    std::string cmd = std::string(bin) + " " + args + " 2>" + err_path;

    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WEXITSTATUS(status);

    std::ifstream err(err_path);
    std::stringstream ss;
    ss << err.rdbuf();
    r.err = ss.str();
    std::remove(err_path.c_str());
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    bool header = true;
    while (std::getline(ss, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

const char* kRefConfig = "cli_ref.json";
const char* kNeutrinoConfig = "cli_neutrino.json";
const char* kHeavyConfig = "cli_heavy.json";

void write_configs() {
    ModelInput ref{particle_from_gap(1e-8, 1e-25, 0.7853981633974483),
                   {1e-15, 3e7, 1e4, 6e24, 1e7, {}}};
    save_config(ref, kRefConfig);

    ModelInput nu{particle_from_gap(1e-38, 1e-38, 0.7853981633974483),
                  {1e-15, 3e7, 1e4, 6e24, 1e7, {}}};
    save_config(nu, kNeutrinoConfig);

    ModelInput heavy{particle_from_gap(1.0, 1e-17, 0.7853981633974483),
                     {1e-15, 7.4e-10, 1e4, 1.0, 1.0, {}}};
    save_config(heavy, kHeavyConfig);
}

struct ConfigFixture {
    ConfigFixture() { write_configs(); }
    ~ConfigFixture() {
        std::remove(kRefConfig);
        std::remove(kNeutrinoConfig);
        std::remove(kHeavyConfig);
    }
};

}  // namespace

TEST_CASE_FIXTURE(ConfigFixture, "usage and config errors exit 2") {
    CHECK(run_cli("curve --config " + std::string(kRefConfig) + " --points 1").code == 2);
    CHECK(run_cli("curve").code == 2);
    CHECK(run_cli("nonsense --config x.json").code == 2);

    auto bad_gamma = run_cli("check --config " + std::string(kRefConfig) + " --gamma 0.5");
    CHECK(bad_gamma.code == 2);
    CHECK(bad_gamma.err.find("gamma") != std::string::npos);

    std::ofstream("cli_bad.json") << R"({"m1_kg":1.0,"dm_kg":0.1,"theta_rad":0.3,
        "d_m":1e-15,"L_m":3e7,"gamma":1e4,"M_kg":6e24,"R_m":1e7,"wat":1})";
    auto unknown = run_cli("check --config cli_bad.json");
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("wat") != std::string::npos);
    std::remove("cli_bad.json");

    CHECK(run_cli("--help").code == 0);
}

TEST_CASE_FIXTURE(ConfigFixture, "cmd_curve") {
    SUBCASE("theta = 0 emits constant unit probability columns") {
        auto r = run_cli("curve --config " + std::string(kRefConfig) +
                         " --theta 0 --points 50 --out cli_curve0.csv");
        CHECK(r.code == 0);
        std::string text = slurp("cli_curve0.csv");
        CHECK(text.find("L_m,P_isolated,P_shifted,P_joint,P_marginal") == 0);
        auto rows = parse_csv(text);
        REQUIRE(rows.size() == 50);
        for (const auto& row : rows) {
            REQUIRE(row.size() == 5);
            for (std::size_t i = 1; i < 5; ++i) CHECK(row[i] == 1.0);
        }
        std::remove("cli_curve0.csv");
        std::remove("cli_curve0.csv.manifest.json");
    }
    SUBCASE("fitted period matches oscillation_wavelength within 1%") {
        Constants k = codata2018();
        ParticleSpec p = particle_from_gap(1e-8, 1e-25, 0.7853981633974483);
        double v = speed_from_gamma(1e4);
        double lambda = oscillation_wavelength(p, 1e4);
        double t_int = lambda * (v / k.c) / 2.0;

        char args[512];
        std::snprintf(args, sizeof args,
                      "curve --config %s --L-min 0 --L-max %.17g --points 2400 "
                      "--out cli_curve.csv",
                      kRefConfig, 20.0 * t_int);
        auto r = run_cli(args);
        CHECK(r.code == 0);
        auto rows = parse_csv(slurp("cli_curve.csv"));
        REQUIRE(rows.size() == 2400);
        std::vector<double> u, y;
        for (const auto& row : rows) {
            u.push_back(row[0]);
            y.push_back(row[1]);
        }
        double fitted = fitutil::fit_period(u, y, t_int * 1.03);
        CHECK(std::fabs(2.0 * fitted * (k.c / v) / lambda - 1.0) <= 0.01);
        std::remove("cli_curve.csv");
        std::remove("cli_curve.csv.manifest.json");
    }
    SUBCASE("default window ends at the configured baseline") {
        auto r = run_cli("curve --config " + std::string(kRefConfig) +
                         " --points 10 --out cli_curve_d.csv");
        CHECK(r.code == 0);
        auto rows = parse_csv(slurp("cli_curve_d.csv"));
        REQUIRE(rows.size() == 10);
        CHECK(rows.front()[0] == 0.0);
        CHECK(rows.back()[0] == doctest::Approx(3e7));
        std::remove("cli_curve_d.csv");
        std::remove("cli_curve_d.csv.manifest.json");
    }
}

TEST_CASE_FIXTURE(ConfigFixture, "cmd_entangle") {
    SUBCASE("disabling the coupling zeroes the concurrence column") {
        auto r = run_cli("entangle --config " + std::string(kHeavyConfig) +
                         " --no-gravity --points 40 --tau-min 0 --tau-max 1e-4 "
                         "--out cli_ent0.csv");
        CHECK(r.code == 0);
        std::string text = slurp("cli_ent0.csv");
        CHECK(text.find("tau_s,L_m,concurrence,negativity,entropy_bits,phi_E_reduced_rad") == 0);
        auto rows = parse_csv(text);
        REQUIRE(rows.size() == 40);
        for (const auto& row : rows) CHECK(row[2] <= 1e-12);
        std::remove("cli_ent0.csv");
        std::remove("cli_ent0.csv.manifest.json");
    }
    SUBCASE("default range spans one entangling period") {
        auto r = run_cli("entangle --config " + std::string(kHeavyConfig) +
                         " --points 513 --out cli_ent.csv");
        CHECK(r.code == 0);
        auto rows = parse_csv(slurp("cli_ent.csv"));
        REQUIRE(rows.size() == 513);

        // Closed form per row, maximum ~1 for theta = pi/4, and a clean
        // return to zero after the full period.
        double max_c = 0.0;
        for (const auto& row : rows) {
            double phi_e = row[5];
            double want = std::fabs(std::sin(phi_e / 2.0));
            CHECK(std::fabs(row[2] - want) <= 1e-9);
            max_c = std::max(max_c, row[2]);
        }
        CHECK(max_c == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rows.back()[2] <= 1e-10);
        CHECK(rows.front()[2] == 0.0);
        std::remove("cli_ent.csv");
        std::remove("cli_ent.csv.manifest.json");
    }
}

TEST_CASE_FIXTURE(ConfigFixture, "cmd_check exit codes and JSON") {
    SUBCASE("reference parameters are marginal: exit 3") {
        auto r = run_cli("check --config " + std::string(kRefConfig));
        CHECK(r.code == 3);
        CHECK(r.out.find("marginal") != std::string::npos);
    }
    SUBCASE("large dm hard-fails the wavelength bound: exit 4") {
        auto r = run_cli("check --config " + std::string(kRefConfig) + " --dm 1e-21");
        CHECK(r.code == 4);
    }
    SUBCASE("heavier m1 passes every bound strictly: exit 0") {
        auto r = run_cli("check --config " + std::string(kRefConfig) + " --m1 1e-5");
        CHECK(r.code == 0);
    }
    SUBCASE("M = 0 passes the background check with a capped margin") {
        auto r = run_cli("check --config " + std::string(kRefConfig) +
                         " --M 0 --out cli_check.json");
        CHECK(r.code == 3);  // spreading still marginal
        auto doc = nlohmann::json::parse(slurp("cli_check.json"));
        bool found = false;
        for (const auto& c : doc["constraints"]) {
            if (c["name"] == "background") {
                found = true;
                CHECK(c["pass"].get<bool>());
                CHECK(c["margin_ratio"].get<double>() == 1e300);
            }
        }
        CHECK(found);
        std::remove("cli_check.json");
        std::remove("cli_check.json.manifest.json");
    }
}

TEST_CASE_FIXTURE(ConfigFixture, "cmd_scan") {
    SUBCASE("5-point grid emits header plus 5 rows") {
        auto r = run_cli("scan --config " + std::string(kRefConfig) +
                         " --axis dm:1e-27:1e-23:5:log --out cli_scan.csv");
        CHECK(r.code == 0);
        std::string text = slurp("cli_scan.csv");
        CHECK(text.find("dm,lambda_m,phi_G_rad,phi_E_rad,wl_pass,spread_pass,bg_pass,"
                        "spread_margin,wl_margin,bg_margin") == 0);
        auto rows = parse_csv(text);
        REQUIRE(rows.size() == 5);
        for (const auto& row : rows) REQUIRE(row.size() == 10);
        // Wavelength margin decreasing in dm.
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][8] < rows[i - 1][8]);
        std::remove("cli_scan.csv");
        std::remove("cli_scan.csv.manifest.json");
    }
    SUBCASE("JSON variant carries identical fields") {
        auto r = run_cli("scan --config " + std::string(kRefConfig) +
                         " --axis gamma:1e3:1e5:3:log --format json --out cli_scan.json");
        CHECK(r.code == 0);
        auto doc = nlohmann::json::parse(slurp("cli_scan.json"));
        REQUIRE(doc.is_array());
        REQUIRE(doc.size() == 3);
        for (const auto& row : doc) {
            CHECK(row.contains("gamma"));
            for (const char* key : {"lambda_m", "phi_G_rad", "phi_E_rad", "wl_pass",
                                    "spread_pass", "bg_pass", "spread_margin", "wl_margin",
                                    "bg_margin"}) {
                CHECK(row.contains(key));
            }
        }
        std::remove("cli_scan.json");
        std::remove("cli_scan.json.manifest.json");
    }
    SUBCASE("malformed axis is a usage error") {
        CHECK(run_cli("scan --config " + std::string(kRefConfig) + " --axis dm:1:2").code == 2);
        CHECK(run_cli("scan --config " + std::string(kRefConfig) +
                      " --axis dm:1e-27:1e-23:5:cubic")
                  .code == 2);
    }
}

TEST_CASE_FIXTURE(ConfigFixture, "cmd_events determinism and manifest") {
    std::string base = "events --config " + std::string(kRefConfig) +
                       " --seed 424242 --n-pairs 5000 --bins 20 --fraction 0.5";
    auto r1 = run_cli(base + " --out cli_ev_a.csv");
    auto r2 = run_cli(base + " --out cli_ev_b.csv");
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);

    std::string a = slurp("cli_ev_a.csv");
    std::string b = slurp("cli_ev_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.find("L_bin_m,n_pairs,n_double,n_single") == 0);
    CHECK(a.find("\r") == std::string::npos);

    auto manifest = nlohmann::json::parse(slurp("cli_ev_a.csv.manifest.json"));
    CHECK(manifest["command"] == "events");
    CHECK(manifest["seed"] == 424242);
    CHECK(manifest["config"] == kRefConfig);
    CHECK(manifest["tool_version"] == "1.0.0");
    CHECK(manifest["constants"] == "CODATA-2018");
    CHECK(manifest["outputs"][0] == "cli_ev_a.csv");
    CHECK(manifest["duration_s"].get<double>() >= 0.0);

    // The config file itself is untouched by runs.
    std::string before = slurp(kRefConfig);
    run_cli("events --config " + std::string(kRefConfig) + " --out cli_ev_c.csv");
    CHECK(slurp(kRefConfig) == before);

    for (const char* f : {"cli_ev_a.csv", "cli_ev_b.csv", "cli_ev_c.csv"}) {
        std::remove(f);
        std::remove((std::string(f) + ".manifest.json").c_str());
    }
}

TEST_CASE_FIXTURE(ConfigFixture, "cmd_power") {
    SUBCASE("neutrino regime: not resolvable, exit 5") {
        auto r = run_cli("power --config " + std::string(kNeutrinoConfig) + " --seed 7");
        CHECK(r.code == 5);
        CHECK(r.err.find("not resolvable") != std::string::npos);
        auto doc = nlohmann::json::parse(r.out);
        CHECK(!doc["resolvable"].get<bool>());
    }
    SUBCASE("heavy pair resolves with a small n_required") {
        auto r = run_cli("power --config " + std::string(kHeavyConfig) +
                         " --seed 11 --confidence 0.95");
        CHECK(r.code == 0);
        auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["resolvable"].get<bool>());
        CHECK(doc["n_required"].get<std::uint64_t>() >= 1);
        CHECK(doc["n_required"].get<std::uint64_t>() <= 100);
        CHECK(doc["power"].get<double>() >= 0.9);
        CHECK(doc["trials"].get<int>() == 200);
    }
}
