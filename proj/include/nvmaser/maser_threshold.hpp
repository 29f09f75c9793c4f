#pragma once

// Masing threshold extraction from pump-power sweeps and the empirical
// feasibility envelope (pump window, misalignment window, Q_L guidance).
//
// Pure functions; thread-safe.

#include <cmath>
#include <string>
#include <vector>

#include "nvmaser/constants.hpp"
#include "nvmaser/crystal_geometry.hpp"
#include "nvmaser/errors.hpp"

namespace nvmaser {

struct PumpPoint {
    double pump_mw = 0.0;
    double output_dbm = 0.0;
    bool detected = false;
};

struct PumpSweep {
    std::vector<PumpPoint> points;

    static PumpSweep from_points(std::vector<PumpPoint> pts) {
        if (pts.empty()) throw invalid_input_error("pump sweep is empty");
        for (const auto& p : pts) {
            if (!std::isfinite(p.pump_mw) || p.pump_mw <= 0.0) {
                throw invalid_input_error("pump powers must be positive and finite");
            }
            if (p.detected && !std::isfinite(p.output_dbm)) {
                throw invalid_input_error("detected output power must be finite");
            }
        }
        return PumpSweep{std::move(pts)};
    }
};

struct ThresholdFit {
    double threshold_mw = 0.0;       // x-intercept of the linear input-output line
    double slope = 0.0;              // mW output per mW pump
    double residual_rms_mw = 0.0;
    int points_used = 0;
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) {
    if (!(mw > 0.0)) throw invalid_input_error("power must be positive to express in dBm");
    return 10.0 * std::log10(mw);
}

// Least-squares line through the detected points on a linear power scale;
// the threshold is where the line crosses zero output.
inline ThresholdFit fit_threshold(const PumpSweep& sweep) {
    std::vector<std::pair<double, double>> pts;  // (pump mW, output mW)
    for (const auto& p : sweep.points) {
        if (p.detected) pts.emplace_back(p.pump_mw, dbm_to_mw(p.output_dbm));
    }
    if (pts.size() < 2) {
        throw computation_error("no inversion: fewer than 2 detected points in sweep");
    }

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0.0)) throw computation_error("threshold fit: pump powers are all equal");

    ThresholdFit fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    if (!(fit.slope > 0.0)) {
        throw computation_error("threshold fit: non-positive slope " + std::to_string(fit.slope));
    }
    fit.threshold_mw = -intercept / fit.slope;
    if (!(fit.threshold_mw > 0.0)) {
        throw computation_error("threshold fit extrapolates to a non-positive pump power");
    }
    double sse = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (intercept + fit.slope * x);
        sse += r * r;
    }
    fit.residual_rms_mw = std::sqrt(sse / static_cast<double>(pts.size()));
    fit.points_used = static_cast<int>(pts.size());
    return fit;
}

// Demonstrated operating envelope; all bounds overridable through RunConfig.
struct FeasibilityEnvelope {
    double pump_threshold_mw = constants::kPumpThresholdMw;
    double pump_quench_mw = constants::kPumpQuenchMw;          // hard cutoff, NV0 conversion
    double theta_window_deg = constants::kThetaWindowDeg;      // on the folded angle
    double q_loaded_recommended = constants::kQLoadedRecommended;
    double q_loaded_demonstrated = constants::kQLoadedDemonstrated;
    double pump_demonstrated_mw = constants::kPumpDemonstratedMw;

    void validate() const {
        if (!(pump_threshold_mw > 0.0) || !(pump_quench_mw > pump_threshold_mw)) {
            throw invalid_input_error("feasibility envelope: need 0 < threshold < quench");
        }
        if (!(theta_window_deg > 0.0 && theta_window_deg <= constants::kFoldMaxDeg)) {
            throw invalid_input_error("feasibility envelope: theta window outside (0, 35.25]");
        }
        if (!(q_loaded_recommended > 0.0) || !(q_loaded_demonstrated > 0.0) ||
            !(pump_demonstrated_mw > 0.0)) {
            throw invalid_input_error("feasibility envelope: bounds must be positive");
        }
    }
};

struct FeasibilityCheck {
    std::string name;
    bool hard = false;       // advisory checks never gate the verdict
    double bound = 0.0;
    double actual = 0.0;
    bool pass = false;
};

struct FeasibilityReport {
    bool feasible = false;   // conjunction of the hard checks
    std::vector<FeasibilityCheck> checks;
};

inline FeasibilityReport check_feasibility(double pump_mw, double theta_deg, double q_loaded,
                                           const FeasibilityEnvelope& env = {}) {
    if (!std::isfinite(pump_mw) || pump_mw <= 0.0 || !std::isfinite(theta_deg) ||
        !std::isfinite(q_loaded) || q_loaded <= 0.0) {
        throw invalid_input_error("feasibility inputs must be positive and finite");
    }
    env.validate();
    const double folded = fold_theta(theta_deg);

    FeasibilityReport report;
    report.checks = {
        {"pump_above_threshold", true, env.pump_threshold_mw, pump_mw,
         pump_mw >= env.pump_threshold_mw},
        {"pump_below_quench", true, env.pump_quench_mw, pump_mw, pump_mw < env.pump_quench_mw},
        {"fold_theta_within_window", true, env.theta_window_deg, folded,
         folded <= env.theta_window_deg},
        {"q_loaded_recommended", false, env.q_loaded_recommended, q_loaded,
         q_loaded >= env.q_loaded_recommended},
        {"q_loaded_demonstrated", false, env.q_loaded_demonstrated, q_loaded,
         q_loaded >= env.q_loaded_demonstrated},
        {"pump_within_demonstrated", false, env.pump_demonstrated_mw, pump_mw,
         pump_mw <= env.pump_demonstrated_mw},
    };
    report.feasible = true;
    for (const auto& c : report.checks) {
        if (c.hard && !c.pass) report.feasible = false;
    }
    return report;
}

// Threshold rescaling between resonator configurations, assuming the
// threshold is inversely proportional to the Purcell figure of merit.
inline double scale_threshold(double p_th_ref_mw, double fom_ref, double fom_new) {
    if (!(p_th_ref_mw > 0.0) || !(fom_ref > 0.0) || !(fom_new > 0.0) ||
        !std::isfinite(p_th_ref_mw) || !std::isfinite(fom_ref) || !std::isfinite(fom_new)) {
        throw invalid_input_error("scale_threshold needs positive finite inputs");
    }
    return p_th_ref_mw * fom_ref / fom_new;
}

}  // namespace nvmaser
