// End-to-end checks of the nvmaser binary: exit codes, JSON payloads and
// byte-level determinism.

#include <catch2/catch.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#ifndef NVMASER_CLI_PATH
#error "NVMASER_CLI_PATH must point at the built nvmaser binary"
#endif

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const std::string out_path = "cli_stdout_" + std::to_string(counter) + ".tmp";
    const std::string err_path = "cli_stderr_" + std::to_string(counter) + ".tmp";
    ++counter;
    const std::string cmd = env_prefix + std::string(NVMASER_CLI_PATH) + " " + args + " > " +
                            out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("resonance subcommand emits the lower-branch anchor field") {
    const CliResult r = run_cli("resonance --freq-mhz 9648 --theta-deg 0 --branch lower");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["field_mt"].get<double>() == Approx(241.8).margin(0.5));
    CHECK(j["branch"] == "lower");
}

TEST_CASE("orient subcommand maps phi 44 to theta -10") {
    const CliResult r = run_cli("orient --phi-deg 44");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["theta_deg"].get<double>() == Approx(-10.0));
    CHECK(j["fold_deg"].get<double>() == Approx(10.0));
}

TEST_CASE("calibrate subcommand reproduces the affine fixed point") {
    const CliResult r = run_cli("calibrate --b-low-gauss 24.468");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["output_gauss"].get<double>() == Approx(26.83).margin(1e-9));

    const CliResult inv = run_cli("calibrate --b-low-gauss 26.83 --invert");
    REQUIRE(inv.exit_code == 0);
    CHECK(nlohmann::json::parse(inv.out)["output_gauss"].get<double>() ==
          Approx(24.468).margin(1e-9));
}

TEST_CASE("hyperfine subcommand lists the three line positions") {
    const CliResult r = run_cli("hyperfine --center-mt 419.49");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["fields_mt"].size() == 3);
    CHECK(j["fields_mt"][0].get<double>() == Approx(419.43));
    CHECK(j["fields_mt"][2].get<double>() == Approx(419.56));
}

TEST_CASE("mount subcommand reports theta_min zero at half the tetrahedral angle") {
    const CliResult r = run_cli("mount --rotation-deg 54.7356");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["theta_min_deg"].get<double>() == Approx(0.0).margin(0.01));
    REQUIRE(j["per_axis_deg"].size() == 4);
}

TEST_CASE("feasible subcommand mirrors the demonstrated verdicts") {
    auto verdict = [](const std::string& args) {
        const CliResult r = run_cli("feasible " + args);
        REQUIRE(r.exit_code == 0);
        return nlohmann::json::parse(r.out)["feasible"].get<bool>();
    };
    CHECK(verdict("--pump-mw 1570 --theta-deg -18 --q 21800"));
    CHECK_FALSE(verdict("--pump-mw 1570 --theta-deg -24 --q 21800"));
    CHECK_FALSE(verdict("--pump-mw 3700 --theta-deg 0 --q 30000"));
}

TEST_CASE("identical invocations produce byte-identical output") {
    const CliResult a = run_cli("resonance --freq-mhz 9648 --theta-deg -18");
    const CliResult b = run_cli("resonance --freq-mhz 9648 --theta-deg -18");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const CliResult s1 = run_cli("sweep --freq-mhz 9648 --theta-from 0 --theta-to 24 --steps 25");
    const CliResult s2 = run_cli("sweep --freq-mhz 9648 --theta-from 0 --theta-to 24 --steps 25");
    REQUIRE(s1.exit_code == 0);
    CHECK(s1.out == s2.out);
    CHECK(s1.out.rfind("theta_deg,field_mt\n", 0) == 0);
    // 25 rows plus header
    CHECK(std::count(s1.out.begin(), s1.out.end(), '\n') == 26);
}

TEST_CASE("exit codes distinguish invalid input from computation failures") {
    CHECK(run_cli("resonance --freq-mhz 9648").exit_code == 1);       // missing flag
    CHECK(run_cli("bogus-subcommand").exit_code == 1);
    CHECK(run_cli("resonance --freq-mhz -5 --theta-deg 0").exit_code == 1);
    // lower branch can never reach 2000 MHz (below the zero-field splitting)
    const CliResult no_root = run_cli("resonance --freq-mhz 2000 --theta-deg 0 --branch lower");
    CHECK(no_root.exit_code == 2);
    CHECK(no_root.err.find("error:") != std::string::npos);
    CHECK(run_cli("fit-q --input does_not_exist.csv").exit_code == 1);
    CHECK(run_cli("sweep --freq-mhz 9648 --theta-from 0 --theta-to 5 --steps 1").exit_code == 1);
}

TEST_CASE("threshold subcommand fits a CSV sweep") {
    const std::string path = "cli_sweep_fixture.csv";
    std::ofstream(path) << "pump_mw,peak_dbm,detected\n"
                           "300,-120,0\n"
                           "600,0,1\n"
                           "1000,4.771212547196624,1\n"
                           "1400,6.989700043360188,1\n";
    const CliResult r = run_cli("threshold --input " + path);
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["threshold_mw"].get<double>() == Approx(400.0).margin(0.1));
    CHECK(j["points_used"] == 3);
}

TEST_CASE("config files override parameters and unknown keys are fatal") {
    const std::string good = "cli_cfg_good.json";
    std::ofstream(good) << R"({"spin": {"d_zfs_mhz": 2900.0}})";
    const CliResult r =
        run_cli("--config " + good + " resonance --freq-mhz 9648 --theta-deg 0 --branch upper");
    std::remove(good.c_str());
    REQUIRE(r.exit_code == 0);
    // (9648 + 2900) / gamma
    CHECK(nlohmann::json::parse(r.out)["field_mt"].get<double>() == Approx(447.75).margin(0.05));

    const std::string bad = "cli_cfg_bad.json";
    std::ofstream(bad) << R"({"spin": {"dzfs": 2900.0}})";
    const CliResult rb =
        run_cli("--config " + bad + " resonance --freq-mhz 9648 --theta-deg 0");
    std::remove(bad.c_str());
    CHECK(rb.exit_code == 1);
    CHECK(rb.err.find("unknown key") != std::string::npos);

    // same config through the environment variable
    const std::string env_cfg = "cli_cfg_env.json";
    std::ofstream(env_cfg) << R"({"spin": {"d_zfs_mhz": 2900.0}})";
    const CliResult re = run_cli("resonance --freq-mhz 9648 --theta-deg 0 --branch upper",
                                 "NVMASER_CONFIG=" + env_cfg + " ");
    std::remove(env_cfg.c_str());
    REQUIRE(re.exit_code == 0);
    CHECK(nlohmann::json::parse(re.out)["field_mt"].get<double>() == Approx(447.75).margin(0.05));
}

TEST_CASE("fit-q subcommand analyzes a trace file end to end") {
    // ideal one-port resonance written straight into the CSV
    const std::string path = "cli_s11_fixture.csv";
    {
        std::ofstream out(path);
        out << "freq_hz,re,im\n";
        const double f0 = 9648e6, q = 21800.0, k = 2.0 * 0.3 / 1.3;
        for (int i = 0; i < 201; ++i) {
            const double f = f0 - 5.0 * f0 / q + (10.0 * f0 / q) * i / 200.0;
            const double tr = 2.0 * q * (f - f0) / f0;
            const double denom = 1.0 + tr * tr;
            out.precision(17);
            out << f << "," << 1.0 - k / denom << "," << k * tr / denom << "\n";
        }
    }
    const CliResult r = run_cli("fit-q --input " + path);
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["q_loaded"].get<double>() == Approx(21800.0).epsilon(5e-3));
    CHECK(j["regime"] == "undercoupled");
    CHECK(j["bandwidth_khz"].get<double>() == Approx(442.6).margin(2.0));
}

TEST_CASE("modevol subcommand integrates a uniform map from disk") {
    const std::string path = "cli_map_fixture.csv";
    {
        std::ofstream out(path);
        out << "r_mm,z_mm,h2\n";
        for (int iz = 0; iz <= 50; ++iz) {
            for (int ir = 0; ir <= 50; ++ir) {
                out << (10.0 * ir / 50.0) << "," << (10.0 * iz / 50.0) << ",1.0\n";
            }
        }
    }
    const CliResult r = run_cli("modevol --input " + path);
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["v_mode_cm3"].get<double>() == Approx(3.1416).margin(2e-3));
}
