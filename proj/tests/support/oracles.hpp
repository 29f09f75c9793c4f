#pragma once

// Test-side oracles, independent of the implementation routes they check:
//  - characteristic-polynomial (Cardano) eigenvalues for symmetric 3x3
//    matrices, Newton-polished on the cubic (the library uses Jacobi);
//  - synthetic one-port reflection traces for Q-circle recovery;
//  - Rodrigues-formula rotation composition for the mount geometry;
//  - brute-force angle fold over the 70.5-degree lattice.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "nvmaser/linalg.hpp"
#include "nvmaser/resonator.hpp"

namespace oracles {

// Roots of the characteristic polynomial det(A - x I) = 0 for symmetric A,
// via the trigonometric Cardano solution, ascending.
inline std::array<double, 3> cardano_eigenvalues(const nvmaser::Mat3& a) {
    const double tr = a[0][0] + a[1][1] + a[2][2];
    const double m2 = a[0][0] * a[1][1] - a[0][1] * a[0][1] + a[0][0] * a[2][2] -
                      a[0][2] * a[0][2] + a[1][1] * a[2][2] - a[1][2] * a[1][2];
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[1][2]) -
                       a[0][1] * (a[0][1] * a[2][2] - a[1][2] * a[0][2]) +
                       a[0][2] * (a[0][1] * a[1][2] - a[1][1] * a[0][2]);
    // x^3 - tr x^2 + m2 x - det = 0, depressed with x = y + tr/3
    const double p = m2 - tr * tr / 3.0;
    const double q = -2.0 * tr * tr * tr / 27.0 + tr * m2 / 3.0 - det;
    std::array<double, 3> roots{};
    if (p >= 0.0) {
        // only possible for a multiple of the identity (numerically p ~ 0)
        roots = {tr / 3.0, tr / 3.0, tr / 3.0};
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double c = 3.0 * q / (p * m);
        c = std::clamp(c, -1.0, 1.0);
        const double phi = std::acos(c) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots[k] = m * std::cos(phi - 2.0 * M_PI * k / 3.0) + tr / 3.0;
        }
    }
    // Newton polish on the characteristic cubic
    for (double& x : roots) {
        for (int it = 0; it < 3; ++it) {
            const double f = ((x - tr) * x + m2) * x - det;
            const double df = (3.0 * x - 2.0 * tr) * x + m2;
            if (df == 0.0) break;
            const double step = f / df;
            x -= step;
            if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(x))) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Ideal one-port reflection of a single resonance:
//   Gamma(f) = Gamma_d * (1 - (2 beta/(1+beta)) / (1 + 2j Q (f-f0)/f0))
inline nvmaser::S11Trace synthetic_s11(double f0_hz, double q_loaded, double beta,
                                       std::complex<double> gamma_d = {1.0, 0.0},
                                       int n_points = 201, double span_bandwidths = 10.0) {
    const double bw = f0_hz / q_loaded;
    const double f_start = f0_hz - span_bandwidths * bw / 2.0;
    const double f_stop = f0_hz + span_bandwidths * bw / 2.0;
    std::vector<nvmaser::S11Point> pts;
    pts.reserve(static_cast<std::size_t>(n_points));
    const double k = 2.0 * beta / (1.0 + beta);
    for (int i = 0; i < n_points; ++i) {
        const double f = f_start + (f_stop - f_start) * i / (n_points - 1);
        const std::complex<double> denom{1.0, 2.0 * q_loaded * (f - f0_hz) / f0_hz};
        pts.push_back({f, gamma_d * (1.0 - k / denom)});
    }
    return nvmaser::S11Trace::from_points(std::move(pts));
}

// Rotation by angle_deg about an arbitrary unit axis (Rodrigues formula).
inline nvmaser::Vec3 rodrigues(const nvmaser::Vec3& v, const nvmaser::Vec3& axis,
                               double angle_deg) {
    const double a = angle_deg * M_PI / 180.0;
    const nvmaser::Vec3 k = axis.normalized();
    const nvmaser::Vec3 kxv = k.cross(v);
    const double kdotv = k.dot(v);
    return v * std::cos(a) + kxv * std::sin(a) + k * (kdotv * (1.0 - std::cos(a)));
}

// Mount geometry rebuilt step by step: start from the crystal frame glued to
// the slant face, then rotate the whole body about the W-axis.
inline std::array<nvmaser::Vec3, 4> mounted_axes_oracle(double slant_deg, double rotation_deg) {
    using nvmaser::Vec3;
    const double s = slant_deg * M_PI / 180.0;
    const Vec3 normal{std::sin(s), std::cos(s), 0.0};   // image of [001]
    const Vec3 downhill{std::cos(s), -std::sin(s), 0.0};  // image of [010]
    const Vec3 horizontal{0.0, 0.0, 1.0};               // image of [100]
    const std::array<Vec3, 4> crystal{Vec3{1, 1, 1}, Vec3{1, -1, -1}, Vec3{-1, 1, -1},
                                      Vec3{-1, -1, 1}};
    std::array<Vec3, 4> out{};
    const Vec3 w_axis{0.0, 1.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec3 c = crystal[i] * (1.0 / std::sqrt(3.0));
        const Vec3 glued = horizontal * c.x + downhill * c.y + normal * c.z;
        out[i] = rodrigues(glued, w_axis, rotation_deg);
    }
    return out;
}

inline double acute_angle_deg(const nvmaser::Vec3& a, const nvmaser::Vec3& b) {
    const double c = std::clamp(std::fabs(a.normalized().dot(b.normalized())), 0.0, 1.0);
    return std::acos(c) * 180.0 / M_PI;
}

// Fold as the distance from |theta| to the nearest multiple of 70.5 degrees.
inline double fold_oracle(double theta_deg) {
    const double t = std::fabs(theta_deg);
    double best = 1e300;
    for (int k = -20; k <= 20; ++k) {
        best = std::min(best, std::fabs(t - 70.5 * k));
    }
    return best;
}

}  // namespace oracles
