#pragma once

// Vector geometry of the diamond plate on its 45-degree sapphire wedge and
// the four tetrahedral <111> NV axes.
//
// Lab frame convention: B_dc along +z, wedge cylindrical axis (W-axis) along
// +y, and at zero W-rotation the slant face of the wedge points its
// horizontal component along +x. The plate is cut with <100> normal to the
// large faces; the default mounting glues it corner-aligned, i.e. with a
// <100> edge along the horizontal line of the slant face, which is what
// places one NV axis of each pair in the plane perpendicular to the W-axis.
//
// All functions are pure and thread-safe; angles in degrees.

#include <algorithm>
#include <array>
#include <cmath>

#include "nvmaser/constants.hpp"
#include "nvmaser/errors.hpp"
#include "nvmaser/linalg.hpp"

namespace nvmaser {

struct NvAxisSet {
    std::array<Vec3, 4> axes;
};

// The four <111> directions of the diamond cell, unit normalized.
inline NvAxisSet nv_axes() {
    const double s = 1.0 / std::sqrt(3.0);
    return {{Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}}};
}

// theta = phi - 54, where phi is the photo-measured plate-edge angle.
inline double theta_from_phi(double phi_deg) {
    if (!std::isfinite(phi_deg)) throw invalid_input_error("phi must be finite");
    return phi_deg - constants::kPhiToThetaOffsetDeg;
}

// Effective misalignment from the nearest in-plane NV axis, antiparallel
// equivalent: min(|theta| mod 70.5, 70.5 - |theta| mod 70.5), in [0, 35.25].
inline double fold_theta(double theta_deg) {
    if (!std::isfinite(theta_deg)) throw invalid_input_error("theta must be finite");
    double a = std::fmod(std::fabs(theta_deg), constants::kFoldPeriodDeg);
    return std::min(a, constants::kFoldPeriodDeg - a);
}

struct MountState {
    double wedge_slant_deg = constants::kWedgeSlantDeg;
    double w_axis_rotation_deg = 0.0;
    // Rotation of the plate about its own normal at glue time; 0 is the
    // corner-aligned mounting described above.
    double plate_azimuth_deg = 0.0;
    Vec3 field_direction{0.0, 0.0, 1.0};

    static MountState with_rotation(double rotation_deg,
                                    double slant_deg = constants::kWedgeSlantDeg) {
        MountState m;
        m.wedge_slant_deg = slant_deg;
        m.w_axis_rotation_deg = rotation_deg;
        return m;
    }
};

struct MisalignmentResult {
    std::array<double, 4> per_axis_deg{};  // acute angle of each NV axis to B_dc
    double theta_min_deg = 0.0;
};

namespace detail {

// Orientation of the crystal axes after gluing the plate to the slant and
// rotating the wedge. Columns are the lab images of [100], [010], [001].
inline Mat3 mount_rotation(const MountState& mount) {
    const double s = mount.wedge_slant_deg * M_PI / 180.0;
    // Slant face normal at zero W-rotation, and the in-face directions:
    // w is the horizontal line of the face, u points uphill.
    const Vec3 normal{std::sin(s), std::cos(s), 0.0};
    const Vec3 uphill{-std::cos(s), std::sin(s), 0.0};
    const Vec3 horizontal{0.0, 0.0, 1.0};
    const Mat3 attach = from_columns(horizontal, -uphill, normal);
    const Mat3 azimuth = rotation_about_z(mount.plate_azimuth_deg);
    return multiply(rotation_about_y(mount.w_axis_rotation_deg), multiply(attach, azimuth));
}

}  // namespace detail

// Acute angle of every NV axis to the field direction after mounting.
inline MisalignmentResult misalignment(const MountState& mount) {
    if (!(mount.wedge_slant_deg > 0.0 && mount.wedge_slant_deg < 90.0)) {
        throw invalid_input_error("wedge slant must lie in (0, 90) degrees");
    }
    if (!std::isfinite(mount.w_axis_rotation_deg) || !std::isfinite(mount.plate_azimuth_deg)) {
        throw invalid_input_error("mount angles must be finite");
    }
    const Vec3 field = mount.field_direction.normalized();
    const Mat3 rot = detail::mount_rotation(mount);

    MisalignmentResult out;
    const NvAxisSet axes = nv_axes();
    for (std::size_t i = 0; i < axes.axes.size(); ++i) {
        const Vec3 lab = apply(rot, axes.axes[i]);
        const double c = std::clamp(std::fabs(lab.dot(field)), 0.0, 1.0);
        out.per_axis_deg[i] = std::acos(c) * 180.0 / M_PI;
    }
    out.theta_min_deg =
        *std::min_element(out.per_axis_deg.begin(), out.per_axis_deg.end());
    return out;
}

}  // namespace nvmaser
