#pragma once

// Ground-state triplet energy model of the NV- centre.
//
// The energy matrix is H = D*Sz^2 + gamma*B*(cos(theta)*Sz + sin(theta)*Sx)
// with spin-1 operators in the (|+1>, |0>, |-1>) basis and B confined to the
// plane containing the NV axis, so H is real symmetric:
//
//   [ D + g*B*cos(t)   g*B*sin(t)/sqrt2        0        ]
//   [ g*B*sin(t)/sqrt2        0         g*B*sin(t)/sqrt2 ]
//   [       0          g*B*sin(t)/sqrt2  D - g*B*cos(t)  ]
//
// Energies in MHz, fields in mT, angles in degrees. Levels keep their
// zero-field character {|0>, |-1>, |+1>} by adiabatic continuation from
// theta = 0; since the spectrum stays non-degenerate away from theta = 0 at
// fixed B > 0, continuation reduces to carrying over the theta = 0 energy
// ordering.
//
// Observable transition frequencies and resonance fields reduce the angle to
// the nearest in-plane NV axis first (fold_theta): past the 35.25-degree
// symmetry point the other axis of the in-plane pair takes over the line.
//
// Everything here is a pure function of its inputs and safe to call
// concurrently.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nvmaser/constants.hpp"
#include "nvmaser/crystal_geometry.hpp"
#include "nvmaser/errors.hpp"
#include "nvmaser/linalg.hpp"

namespace nvmaser {

struct ZfsDerivation {
    double d_zfs_mhz = 0.0;
    double residual_mhz = 0.0;  // |gamma*(b_high+b_low)/2 - f_ref|
};

// B = f / gamma for the Zeeman centre of the triplet splitting.
inline double zeeman_center_field(double freq_mhz, double g_factor) {
    if (!std::isfinite(freq_mhz) || freq_mhz <= 0.0) {
        throw invalid_input_error("frequency must be positive and finite");
    }
    if (!(g_factor >= 1.9 && g_factor <= 2.1)) {
        throw invalid_input_error("g-factor outside the physical range [1.9, 2.1]");
    }
    return freq_mhz / (g_factor * constants::kBohrMagnetonOverPlanckMhzPerMt);
}

// D = gamma*(b_high - b_low)/2 from a maximum-splitting EPR pair, with the
// midpoint consistency residual against the reference frequency. A residual
// above 5 MHz means the pair and frequency do not describe the same spectrum.
inline ZfsDerivation derive_zero_field_splitting(double f_ref_mhz, double b_low_mt,
                                                 double b_high_mt, double g_factor) {
    if (!std::isfinite(f_ref_mhz) || !std::isfinite(b_low_mt) || !std::isfinite(b_high_mt)) {
        throw invalid_input_error("zero-field-splitting inputs must be finite");
    }
    if (!(b_low_mt > 0.0) || b_high_mt < b_low_mt) {
        throw invalid_input_error("need b_high >= b_low > 0");
    }
    const double gamma = g_factor * constants::kBohrMagnetonOverPlanckMhzPerMt;
    ZfsDerivation out;
    out.d_zfs_mhz = gamma * (b_high_mt - b_low_mt) / 2.0;
    out.residual_mhz = std::fabs(gamma * (b_high_mt + b_low_mt) / 2.0 - f_ref_mhz);
    if (out.residual_mhz > 5.0) {
        throw computation_error("EPR pair inconsistent with reference frequency: residual " +
                                std::to_string(out.residual_mhz) + " MHz");
    }
    return out;
}

struct SpinParams {
    double d_zfs_mhz = 0.0;
    double g_factor = 0.0;
    double gamma_mhz_per_mt = 0.0;                 // g_factor * mu_B/h
    std::array<double, 2> hyperfine_spacings_mt{};  // left-to-centre, centre-to-right

    // gamma is always folded from g; D defaults to the EPR-pair derivation.
    static SpinParams make(double g_factor = constants::kFreeElectronG,
                           double d_zfs_mhz = 0.0,
                           std::array<double, 2> hyperfine_spacings_mt = {
                               constants::kHyperfineLeftSpacingMt,
                               constants::kHyperfineRightSpacingMt}) {
        if (!(g_factor >= 1.9 && g_factor <= 2.1)) {
            throw invalid_input_error("g-factor outside the physical range [1.9, 2.1]");
        }
        if (d_zfs_mhz < 0.0 || !std::isfinite(d_zfs_mhz)) {
            throw invalid_input_error("zero-field splitting must be positive (0 = derive)");
        }
        SpinParams p;
        p.g_factor = g_factor;
        p.gamma_mhz_per_mt = g_factor * constants::kBohrMagnetonOverPlanckMhzPerMt;
        // default D from the EPR anchor pair; the formula alone, so a g-factor
        // override does not trip the midpoint-consistency gate of the
        // measured-triple derivation
        p.d_zfs_mhz =
            d_zfs_mhz > 0.0
                ? d_zfs_mhz
                : p.gamma_mhz_per_mt * (constants::kEprHighFieldMt - constants::kEprLowFieldMt) / 2.0;
        if (hyperfine_spacings_mt[0] < 0.0 || hyperfine_spacings_mt[1] < 0.0 ||
            !std::isfinite(hyperfine_spacings_mt[0]) || !std::isfinite(hyperfine_spacings_mt[1])) {
            throw invalid_input_error("hyperfine spacings must be non-negative");
        }
        p.hyperfine_spacings_mt = hyperfine_spacings_mt;
        return p;
    }

    static SpinParams defaults() { return make(); }
};

enum class ZeroFieldState { ket0, ket_minus1, ket_plus1 };

struct TripletLevels {
    std::array<double, 3> energies_mhz{};       // ascending
    std::array<ZeroFieldState, 3> labels{};     // zero-field character per energy
};

enum class Branch { upper, lower };  // upper: |0>->|-1| high-field line; lower: |0>->|+1>

struct Transition {
    Branch branch = Branch::upper;
    double frequency_mhz = 0.0;
    double field_mt = 0.0;
    double theta_deg = 0.0;
};

// The raw single-axis 3x3 energy matrix in MHz (no angle folding).
inline Mat3 triplet_energy_matrix(double b_field_mt, double theta_deg, const SpinParams& params) {
    const double b = params.gamma_mhz_per_mt * b_field_mt;
    const double t = theta_deg * M_PI / 180.0;
    const double diag = b * std::cos(t);
    const double off = b * std::sin(t) / std::sqrt(2.0);
    return {{{params.d_zfs_mhz + diag, off, 0.0},
             {off, 0.0, off},
             {0.0, off, params.d_zfs_mhz - diag}}};
}

inline TripletLevels triplet_levels(double b_field_mt, double theta_deg,
                                    const SpinParams& params) {
    if (!std::isfinite(b_field_mt) || !std::isfinite(theta_deg)) {
        throw invalid_input_error("field and angle must be finite");
    }
    if (b_field_mt < 0.0) throw invalid_input_error("field must be non-negative");

    TripletLevels out;
    out.energies_mhz = eigenvalues_sym3(triplet_energy_matrix(b_field_mt, theta_deg, params));

    // Continuation from theta = 0: sort the analytic theta = 0 levels with a
    // stable tie-break and carry that label order onto the sorted eigenvalues.
    const double b = params.gamma_mhz_per_mt * b_field_mt;
    struct Ref {
        double energy;
        ZeroFieldState state;
    };
    std::array<Ref, 3> ref{{{0.0, ZeroFieldState::ket0},
                            {params.d_zfs_mhz - b, ZeroFieldState::ket_minus1},
                            {params.d_zfs_mhz + b, ZeroFieldState::ket_plus1}}};
    std::stable_sort(ref.begin(), ref.end(),
                     [](const Ref& a, const Ref& c) { return a.energy < c.energy; });
    for (int i = 0; i < 3; ++i) out.labels[i] = ref[i].state;
    return out;
}

// Observable line pair at the given field and crystal misalignment. The angle
// is reduced to the nearest in-plane axis before diagonalizing.
inline std::array<Transition, 2> transition_frequencies(double b_field_mt, double theta_deg,
                                                        const SpinParams& params) {
    const double folded = fold_theta(theta_deg);
    const TripletLevels lv = triplet_levels(b_field_mt, folded, params);
    double e0 = 0.0, em1 = 0.0, ep1 = 0.0;
    for (int i = 0; i < 3; ++i) {
        switch (lv.labels[i]) {
            case ZeroFieldState::ket0: e0 = lv.energies_mhz[i]; break;
            case ZeroFieldState::ket_minus1: em1 = lv.energies_mhz[i]; break;
            case ZeroFieldState::ket_plus1: ep1 = lv.energies_mhz[i]; break;
        }
    }
    return {Transition{Branch::upper, std::fabs(em1 - e0), b_field_mt, theta_deg},
            Transition{Branch::lower, std::fabs(ep1 - e0), b_field_mt, theta_deg}};
}

// Field at which the requested branch crosses f_target, by bisection on the
// bracketed monotone segment: [f/gamma, 1.2*(f+D)/gamma] for the upper
// branch, [0, 1.2*(f+D)/gamma] for the lower. Guaranteed to 1e-4 mT; the
// default tolerance is tighter.
inline double resonance_field(double f_target_mhz, double theta_deg, Branch branch,
                              const SpinParams& params,
                              double tolerance_mt = constants::kFieldToleranceMt) {
    if (!std::isfinite(f_target_mhz) || f_target_mhz <= 0.0) {
        throw invalid_input_error("target frequency must be positive and finite");
    }
    if (!(tolerance_mt > 0.0)) throw invalid_input_error("tolerance must be positive");
    const double folded = fold_theta(theta_deg);

    const auto line_freq = [&](double b_mt) {
        const auto tr = transition_frequencies(b_mt, folded, params);
        return branch == Branch::upper ? tr[0].frequency_mhz : tr[1].frequency_mhz;
    };

    double lo = branch == Branch::upper ? zeeman_center_field(f_target_mhz, params.g_factor) : 0.0;
    double hi = 1.2 * (f_target_mhz + params.d_zfs_mhz) / params.gamma_mhz_per_mt;
    double g_lo = line_freq(lo) - f_target_mhz;
    double g_hi = line_freq(hi) - f_target_mhz;
    if (g_lo == 0.0) return lo;
    if (g_hi == 0.0) return hi;
    if (g_lo > 0.0 || g_hi < 0.0) {
        throw computation_error("no resonance on the " +
                                std::string(branch == Branch::upper ? "upper" : "lower") +
                                " branch bracket for " + std::to_string(f_target_mhz) + " MHz");
    }
    for (int iter = 0; iter < 200 && (hi - lo) > tolerance_mt; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (line_freq(mid) - f_target_mhz < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// The three 14N hyperfine field positions around a centre line.
inline std::array<double, 3> hyperfine_fields(double b_center_mt, const SpinParams& params) {
    if (!std::isfinite(b_center_mt) || b_center_mt <= 0.0) {
        throw invalid_input_error("centre field must be positive and finite");
    }
    return {b_center_mt - params.hyperfine_spacings_mt[0], b_center_mt,
            b_center_mt + params.hyperfine_spacings_mt[1]};
}

}  // namespace nvmaser
