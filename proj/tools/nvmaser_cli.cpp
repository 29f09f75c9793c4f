// nvmaser: command-line surface of the NV- maser modeling toolkit.
//
// Subcommands compute resonance fields, orientation angles, resonator
// parameters, masing thresholds and teslameter calibrations, emitting JSON
// (or CSV for sweeps) on stdout. Exit codes: 0 success, 1 invalid input,
// 2 computation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nvmaser/nvmaser.hpp"
#include "nvmaser/json_writer.hpp"

namespace {

using namespace nvmaser;
namespace jo = nvmaser::jsonout;

RunConfig load_config(const std::string& explicit_path) {
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("NVMASER_CONFIG")) path = env;
    }
    if (path.empty()) {
        std::ifstream probe("nvmaser.json");
        if (probe.good()) path = "nvmaser.json";
    }
    if (path.empty()) return RunConfig{};
    return parse_config(csv::read_file(path));
}

Branch parse_branch(const std::string& name) {
    if (name == "upper") return Branch::upper;
    if (name == "lower") return Branch::lower;
    throw invalid_input_error("branch must be 'upper' or 'lower', got '" + name + "'");
}

void emit(const jo::Node& doc) { std::cout << doc.dump() << "\n"; }

int run(int argc, char** argv) {
    CLI::App app{"NV- diamond maser modeling toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Path to a JSON configuration file");

    // resonance
    auto* resonance_cmd =
        app.add_subcommand("resonance", "Resonance field for a transition branch");
    double res_freq = 0.0, res_theta = 0.0;
    std::string res_branch = "upper";
    resonance_cmd->add_option("--freq-mhz", res_freq, "Target frequency, MHz")->required();
    resonance_cmd->add_option("--theta-deg", res_theta, "Misalignment angle, degrees")->required();
    resonance_cmd->add_option("--branch", res_branch, "upper|lower (default upper)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Resonance field vs angle as CSV");
    double sw_freq = 0.0, sw_from = 0.0, sw_to = 0.0;
    int sw_steps = 0;
    std::string sw_branch = "upper";
    sweep_cmd->add_option("--freq-mhz", sw_freq, "Target frequency, MHz")->required();
    sweep_cmd->add_option("--theta-from", sw_from, "First angle, degrees")->required();
    sweep_cmd->add_option("--theta-to", sw_to, "Last angle, degrees")->required();
    sweep_cmd->add_option("--steps", sw_steps, "Number of sample points (>= 2)")->required();
    sweep_cmd->add_option("--branch", sw_branch, "upper|lower (default upper)");

    // orient
    auto* orient_cmd = app.add_subcommand("orient", "Plate-edge angle phi to misalignment theta");
    double orient_phi = 0.0;
    orient_cmd->add_option("--phi-deg", orient_phi, "Photo-measured plate-edge angle, degrees")
        ->required();

    // mount
    auto* mount_cmd = app.add_subcommand("mount", "Per-axis misalignment for a wedge rotation");
    double mount_rot = 0.0, mount_slant = constants::kWedgeSlantDeg, mount_azimuth = 0.0;
    mount_cmd->add_option("--rotation-deg", mount_rot, "W-axis rotation, degrees")->required();
    mount_cmd->add_option("--slant-deg", mount_slant, "Wedge slant, degrees (default 45)");
    mount_cmd->add_option("--azimuth-deg", mount_azimuth,
                          "Plate azimuth at gluing, degrees (default 0, corner aligned)");

    // fit-q
    auto* fitq_cmd = app.add_subcommand("fit-q", "Q-circle fit of an S11 trace CSV");
    std::string fitq_input;
    fitq_cmd->add_option("--input", fitq_input, "CSV with header freq_hz,re,im")->required();

    // modevol
    auto* modevol_cmd = app.add_subcommand("modevol", "Mode volume of an |H|^2 field map CSV");
    std::string modevol_input;
    modevol_cmd->add_option("--input", modevol_input, "CSV with header r_mm,z_mm,h2")->required();

    // threshold
    auto* threshold_cmd = app.add_subcommand("threshold", "Masing threshold from a pump sweep CSV");
    std::string threshold_input;
    threshold_cmd->add_option("--input", threshold_input, "CSV with header pump_mw,peak_dbm,detected")
        ->required();

    // feasible
    auto* feasible_cmd = app.add_subcommand("feasible", "Masing feasibility for an operating point");
    double fe_pump = 0.0, fe_theta = 0.0, fe_q = 0.0;
    feasible_cmd->add_option("--pump-mw", fe_pump, "Optical pump power, mW")->required();
    feasible_cmd->add_option("--theta-deg", fe_theta, "Misalignment angle, degrees")->required();
    feasible_cmd->add_option("--q", fe_q, "Loaded quality factor")->required();

    // calibrate
    auto* cal_cmd = app.add_subcommand("calibrate", "Probe-offset field calibration");
    double cal_value = 0.0;
    bool cal_invert = false;
    cal_cmd->add_option("--b-low-gauss", cal_value,
                        "Probe reading in Gauss (sample-position field with --invert)")
        ->required();
    cal_cmd->add_flag("--invert", cal_invert, "Map a sample-position field back to the probe");

    // hyperfine
    auto* hf_cmd = app.add_subcommand("hyperfine", "Hyperfine field positions around a centre");
    double hf_center = 0.0;
    hf_cmd->add_option("--center-mt", hf_center, "Centre field, mT")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const RunConfig cfg = load_config(config_path);

    if (resonance_cmd->parsed()) {
        const Branch branch = parse_branch(res_branch);
        const double field =
            resonance_field(res_freq, res_theta, branch, cfg.spin, cfg.field_tolerance_mt);
        jo::Node doc = jo::Node::object();
        doc.add("freq_mhz", jo::Node::raw(jo::mhz(res_freq)));
        doc.add("theta_deg", jo::Node::raw(jo::deg(res_theta)));
        doc.add("fold_deg", jo::Node::raw(jo::deg(fold_theta(res_theta))));
        doc.add("branch", jo::Node::string(res_branch));
        doc.add("field_mt", jo::Node::raw(jo::mt(field)));
        emit(doc);
    } else if (sweep_cmd->parsed()) {
        if (sw_steps < 2) throw invalid_input_error("sweep needs --steps >= 2");
        const Branch branch = parse_branch(sw_branch);
        std::vector<csv::SweepRow> rows;
        rows.reserve(static_cast<std::size_t>(sw_steps));
        for (int i = 0; i < sw_steps; ++i) {
            const double theta =
                sw_from + (sw_to - sw_from) * static_cast<double>(i) / (sw_steps - 1);
            rows.push_back(
                {theta, resonance_field(sw_freq, theta, branch, cfg.spin, cfg.field_tolerance_mt)});
        }
        std::cout << csv::emit_sweep(rows);
    } else if (orient_cmd->parsed()) {
        const double theta = theta_from_phi(orient_phi);
        jo::Node doc = jo::Node::object();
        doc.add("phi_deg", jo::Node::raw(jo::deg(orient_phi)));
        doc.add("theta_deg", jo::Node::raw(jo::deg(theta)));
        doc.add("fold_deg", jo::Node::raw(jo::deg(fold_theta(theta))));
        emit(doc);
    } else if (mount_cmd->parsed()) {
        MountState mount = MountState::with_rotation(mount_rot, mount_slant);
        mount.plate_azimuth_deg = mount_azimuth;
        const MisalignmentResult res = misalignment(mount);
        jo::Node doc = jo::Node::object();
        doc.add("wedge_slant_deg", jo::Node::raw(jo::deg(mount.wedge_slant_deg)));
        doc.add("w_axis_rotation_deg", jo::Node::raw(jo::deg(mount.w_axis_rotation_deg)));
        doc.add("plate_azimuth_deg", jo::Node::raw(jo::deg(mount.plate_azimuth_deg)));
        jo::Node axes = jo::Node::array();
        for (double a : res.per_axis_deg) axes.push(jo::Node::raw(jo::deg(a)));
        doc.add("per_axis_deg", std::move(axes));
        doc.add("theta_min_deg", jo::Node::raw(jo::deg(res.theta_min_deg)));
        emit(doc);
    } else if (fitq_cmd->parsed()) {
        const S11Trace trace = csv::parse_s11(csv::read_file(fitq_input));
        const QCircleFit fit = fit_q_circle(trace);
        jo::Node doc = jo::Node::object();
        doc.add("f0_mhz", jo::Node::raw(jo::mhz(fit.f0_hz / 1e6)));
        doc.add("q_loaded", jo::Node::raw(jo::sig4(fit.q_loaded)));
        doc.add("coupling_beta", jo::Node::raw(jo::sig4(fit.coupling_beta)));
        doc.add("regime", jo::Node::string(to_string(fit.regime)));
        doc.add("f1_mhz", jo::Node::raw(jo::mhz(fit.f1_hz / 1e6)));
        doc.add("f2_mhz", jo::Node::raw(jo::mhz(fit.f2_hz / 1e6)));
        doc.add("bandwidth_khz", jo::Node::raw(jo::sig4(bandwidth(fit.f0_hz, fit.q_loaded) / 1e3)));
        doc.add("points", jo::Node::integer(static_cast<long long>(trace.points.size())));
        emit(doc);
    } else if (modevol_cmd->parsed()) {
        const FieldMap map = csv::parse_field_map(csv::read_file(modevol_input));
        const ModeVolumeResult res = mode_volume(map);
        jo::Node doc = jo::Node::object();
        doc.add("v_mode_cm3", jo::Node::raw(jo::sig4(res.v_mode_cm3)));
        doc.add("hotspot_r_mm", jo::Node::raw(jo::sig4(res.hotspot_r_mm)));
        doc.add("hotspot_z_mm", jo::Node::raw(jo::sig4(res.hotspot_z_mm)));
        doc.add("grid_nr", jo::Node::integer(static_cast<long long>(map.r_mm.size())));
        doc.add("grid_nz", jo::Node::integer(static_cast<long long>(map.z_mm.size())));
        emit(doc);
    } else if (threshold_cmd->parsed()) {
        const PumpSweep sweep = csv::parse_pump_sweep(csv::read_file(threshold_input));
        const ThresholdFit fit = fit_threshold(sweep);
        jo::Node doc = jo::Node::object();
        doc.add("threshold_mw", jo::Node::raw(jo::sig4(fit.threshold_mw)));
        doc.add("slope_mw_per_mw", jo::Node::raw(jo::sig4(fit.slope)));
        doc.add("residual_rms_mw", jo::Node::raw(jo::sig4(fit.residual_rms_mw)));
        doc.add("points_used", jo::Node::integer(fit.points_used));
        emit(doc);
    } else if (feasible_cmd->parsed()) {
        const FeasibilityReport report = check_feasibility(fe_pump, fe_theta, fe_q, cfg.envelope);
        jo::Node doc = jo::Node::object();
        doc.add("pump_mw", jo::Node::raw(jo::sig4(fe_pump)));
        doc.add("theta_deg", jo::Node::raw(jo::deg(fe_theta)));
        doc.add("fold_deg", jo::Node::raw(jo::deg(fold_theta(fe_theta))));
        doc.add("q_loaded", jo::Node::raw(jo::sig4(fe_q)));
        doc.add("feasible", jo::Node::boolean(report.feasible));
        jo::Node checks = jo::Node::array();
        for (const auto& c : report.checks) {
            jo::Node entry = jo::Node::object();
            entry.add("name", jo::Node::string(c.name));
            entry.add("kind", jo::Node::string(c.hard ? "hard" : "advisory"));
            entry.add("bound", jo::Node::raw(jo::sig4(c.bound)));
            entry.add("actual", jo::Node::raw(jo::sig4(c.actual)));
            entry.add("pass", jo::Node::boolean(c.pass));
            checks.push(std::move(entry));
        }
        doc.add("checks", std::move(checks));
        emit(doc);
    } else if (cal_cmd->parsed()) {
        const double out = cal_invert ? invert_calibration(cal_value, cfg.calibration)
                                      : calibrate_field(cal_value, cfg.calibration);
        jo::Node doc = jo::Node::object();
        doc.add("direction", jo::Node::string(cal_invert ? "invert" : "forward"));
        doc.add("input_gauss", jo::Node::raw(jo::gauss(cal_value)));
        doc.add("output_gauss", jo::Node::raw(jo::gauss(out)));
        doc.add("input_mt", jo::Node::raw(jo::mt(gauss_to_mt(cal_value))));
        doc.add("output_mt", jo::Node::raw(jo::mt(gauss_to_mt(out))));
        emit(doc);
    } else if (hf_cmd->parsed()) {
        const auto fields = hyperfine_fields(hf_center, cfg.spin);
        jo::Node doc = jo::Node::object();
        doc.add("center_mt", jo::Node::raw(jo::mt(hf_center)));
        jo::Node spacing = jo::Node::array();
        spacing.push(jo::Node::raw(jo::mt(cfg.spin.hyperfine_spacings_mt[0])));
        spacing.push(jo::Node::raw(jo::mt(cfg.spin.hyperfine_spacings_mt[1])));
        doc.add("spacings_mt", std::move(spacing));
        jo::Node trio = jo::Node::array();
        for (double f : fields) trio.push(jo::Node::raw(jo::mt(f)));
        doc.add("fields_mt", std::move(trio));
        emit(doc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nvmaser::invalid_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nvmaser::computation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
