#pragma once

// Teslameter probe-offset calibration and field-measurement bookkeeping.
// The probe sits 28.5 mm below the sample, so readings are mapped to the
// sample position by an affine law in Gauss:
//   B_samp = (B_low - offset_in) * scale + offset_out

#include <cmath>
#include <vector>

#include "nvmaser/constants.hpp"
#include "nvmaser/errors.hpp"

namespace nvmaser {

inline double gauss_to_mt(double gauss) { return gauss / constants::kGaussPerMt; }
inline double mt_to_gauss(double mt) { return mt * constants::kGaussPerMt; }

struct CalibrationModel {
    double offset_in_gauss = constants::kCalOffsetInGauss;
    double scale = constants::kCalScale;
    double offset_out_gauss = constants::kCalOffsetOutGauss;

    void validate() const {
        if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(offset_in_gauss) ||
            !std::isfinite(offset_out_gauss)) {
            throw invalid_input_error("calibration model needs finite offsets and scale > 0");
        }
    }
};

// Probe reading (offset position) -> field at the sample, Gauss.
inline double calibrate_field(double b_low_gauss, const CalibrationModel& model = {}) {
    if (!std::isfinite(b_low_gauss)) throw invalid_input_error("field reading must be finite");
    model.validate();
    return (b_low_gauss - model.offset_in_gauss) * model.scale + model.offset_out_gauss;
}

// Exact affine inverse of calibrate_field.
inline double invert_calibration(double b_samp_gauss, const CalibrationModel& model = {}) {
    if (!std::isfinite(b_samp_gauss)) throw invalid_input_error("field value must be finite");
    model.validate();
    return (b_samp_gauss - model.offset_out_gauss) / model.scale + model.offset_in_gauss;
}

// mT conveniences around the Gauss-native model.
inline double calibrate_field_mt(double b_low_mt, const CalibrationModel& model = {}) {
    return gauss_to_mt(calibrate_field(mt_to_gauss(b_low_mt), model));
}
inline double invert_calibration_mt(double b_samp_mt, const CalibrationModel& model = {}) {
    return gauss_to_mt(invert_calibration(mt_to_gauss(b_samp_mt), model));
}

// Measurement uncertainty rule: sample standard deviation per hyperfine
// group, worst group taken, then rounded up to the 0.01 mT grid. A
// single-measurement group contributes zero deviation.
inline double field_uncertainty(const std::vector<std::vector<double>>& groups_mt) {
    if (groups_mt.empty()) throw invalid_input_error("field_uncertainty needs at least one group");
    double worst = 0.0;
    for (const auto& g : groups_mt) {
        if (g.empty()) throw invalid_input_error("field_uncertainty groups must be nonempty");
        for (double v : g) {
            if (!std::isfinite(v)) throw invalid_input_error("field measurements must be finite");
        }
        if (g.size() < 2) continue;
        double mean = 0.0;
        for (double v : g) mean += v;
        mean /= static_cast<double>(g.size());
        double ss = 0.0;
        for (double v : g) ss += (v - mean) * (v - mean);
        worst = std::max(worst, std::sqrt(ss / static_cast<double>(g.size() - 1)));
    }
    constexpr double grid = 0.01;
    // snapped ceiling so a value sitting on the grid does not round a step up
    return std::ceil(worst / grid - 1e-9) * grid;
}

// 1 mT search window around a VNA-wobble field estimate.
inline std::pair<double, double> scan_window(double b_estimate_mt) {
    if (!std::isfinite(b_estimate_mt) || b_estimate_mt <= 0.0) {
        throw invalid_input_error("field estimate must be positive and finite");
    }
    return {b_estimate_mt - constants::kScanHalfWidthMt,
            b_estimate_mt + constants::kScanHalfWidthMt};
}

}  // namespace nvmaser
