#pragma once

// Runtime configuration (nvmaser.json): spin parameters, feasibility
// envelope, calibration constants and solver tolerances. Unknown keys are
// rejected outright so unit mistakes in a config file surface immediately.

#include <array>
#include <set>
#include <string>

#include <json.hpp>

#include "nvmaser/calibration.hpp"
#include "nvmaser/constants.hpp"
#include "nvmaser/errors.hpp"
#include "nvmaser/maser_threshold.hpp"
#include "nvmaser/spin_model.hpp"

namespace nvmaser {

struct RunConfig {
    SpinParams spin = SpinParams::defaults();
    FeasibilityEnvelope envelope;
    CalibrationModel calibration;
    double field_tolerance_mt = constants::kFieldToleranceMt;
};

namespace config_detail {

using nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    if (!j.is_object()) throw invalid_input_error("config: " + where + " must be an object");
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) {
            throw invalid_input_error("config: unknown key '" + where + item.key() + "'");
        }
    }
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw invalid_input_error("config: " + where + " must be a number");
    return j.get<double>();
}

}  // namespace config_detail

inline RunConfig parse_config(const std::string& text) {
    using config_detail::number;
    using config_detail::require_keys;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input_error(std::string("config: not valid JSON: ") + e.what());
    }
    require_keys(j, {"spin", "feasibility", "calibration", "solver"}, "");

    RunConfig cfg;
    if (j.contains("spin")) {
        const auto& s = j["spin"];
        require_keys(s, {"g_factor", "d_zfs_mhz", "hyperfine_spacings_mt"}, "spin.");
        double g = constants::kFreeElectronG;
        double d = 0.0;  // 0 means: derive from the EPR anchor pair
        std::array<double, 2> spacings{constants::kHyperfineLeftSpacingMt,
                                       constants::kHyperfineRightSpacingMt};
        if (s.contains("g_factor")) g = number(s["g_factor"], "spin.g_factor");
        if (s.contains("d_zfs_mhz")) d = number(s["d_zfs_mhz"], "spin.d_zfs_mhz");
        if (s.contains("hyperfine_spacings_mt")) {
            const auto& h = s["hyperfine_spacings_mt"];
            if (!h.is_array() || h.size() != 2) {
                throw invalid_input_error("config: spin.hyperfine_spacings_mt must be [left, right]");
            }
            spacings = {number(h[0], "spin.hyperfine_spacings_mt[0]"),
                        number(h[1], "spin.hyperfine_spacings_mt[1]")};
        }
        cfg.spin = SpinParams::make(g, d, spacings);
    }
    if (j.contains("feasibility")) {
        const auto& f = j["feasibility"];
        require_keys(f,
                     {"pump_threshold_mw", "pump_quench_mw", "theta_window_deg",
                      "q_loaded_recommended", "q_loaded_demonstrated", "pump_demonstrated_mw"},
                     "feasibility.");
        auto& e = cfg.envelope;
        if (f.contains("pump_threshold_mw"))
            e.pump_threshold_mw = number(f["pump_threshold_mw"], "feasibility.pump_threshold_mw");
        if (f.contains("pump_quench_mw"))
            e.pump_quench_mw = number(f["pump_quench_mw"], "feasibility.pump_quench_mw");
        if (f.contains("theta_window_deg"))
            e.theta_window_deg = number(f["theta_window_deg"], "feasibility.theta_window_deg");
        if (f.contains("q_loaded_recommended"))
            e.q_loaded_recommended =
                number(f["q_loaded_recommended"], "feasibility.q_loaded_recommended");
        if (f.contains("q_loaded_demonstrated"))
            e.q_loaded_demonstrated =
                number(f["q_loaded_demonstrated"], "feasibility.q_loaded_demonstrated");
        if (f.contains("pump_demonstrated_mw"))
            e.pump_demonstrated_mw =
                number(f["pump_demonstrated_mw"], "feasibility.pump_demonstrated_mw");
        e.validate();
    }
    if (j.contains("calibration")) {
        const auto& c = j["calibration"];
        require_keys(c, {"offset_in_gauss", "scale", "offset_out_gauss"}, "calibration.");
        if (c.contains("offset_in_gauss"))
            cfg.calibration.offset_in_gauss =
                number(c["offset_in_gauss"], "calibration.offset_in_gauss");
        if (c.contains("scale")) cfg.calibration.scale = number(c["scale"], "calibration.scale");
        if (c.contains("offset_out_gauss"))
            cfg.calibration.offset_out_gauss =
                number(c["offset_out_gauss"], "calibration.offset_out_gauss");
        cfg.calibration.validate();
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        require_keys(s, {"field_tolerance_mt"}, "solver.");
        if (s.contains("field_tolerance_mt")) {
            cfg.field_tolerance_mt = number(s["field_tolerance_mt"], "solver.field_tolerance_mt");
            if (!(cfg.field_tolerance_mt > 0.0 && cfg.field_tolerance_mt <= 0.01)) {
                throw invalid_input_error("config: solver.field_tolerance_mt outside (0, 0.01]");
            }
        }
    }
    return cfg;
}

}  // namespace nvmaser
