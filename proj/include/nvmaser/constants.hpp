#pragma once

// Reference constants for the NV- maser toolkit. Field values in mT unless a
// name says otherwise; frequencies in MHz; angles in degrees.

namespace nvmaser {
namespace constants {

// mu_B / h folded to MHz per mT (13.9962 MHz/mT = 0.0139962 GHz/mT).
inline constexpr double kBohrMagnetonOverPlanckMhzPerMt = 13.9962;

// Free-electron g-factor used throughout the instrument model.
inline constexpr double kFreeElectronG = 2.0023;

// EPR anchor: maximum-splitting resonance pair measured at 9570.5 MHz.
// The default zero-field splitting is derived from this pair.
inline constexpr double kEprReferenceFreqMhz = 9570.5;
inline constexpr double kEprLowFieldMt = 239.0;
inline constexpr double kEprHighFieldMt = 444.0;

// 14N hyperfine field offsets, left-to-centre and centre-to-right.
inline constexpr double kHyperfineLeftSpacingMt = 0.06;
inline constexpr double kHyperfineRightSpacingMt = 0.07;

// Tetrahedral bond geometry. The fold period uses the rounded 109.5 deg
// convention of the mounting procedure, so the symmetry point sits at
// (180 - 109.5)/2 = 35.25 deg.
inline constexpr double kFoldPeriodDeg = 70.5;
inline constexpr double kFoldMaxDeg = 35.25;

// Plate-edge angle phi maps to misalignment theta by subtracting 54 deg.
inline constexpr double kPhiToThetaOffsetDeg = 54.0;

// Wedge slant of the sample mount.
inline constexpr double kWedgeSlantDeg = 45.0;

// Empirical masing envelope (4.5 ppm NV, isotopically purified sample).
inline constexpr double kPumpThresholdMw = 475.0;
inline constexpr double kPumpQuenchMw = 3700.0;     // NV0 conversion cutoff
inline constexpr double kPumpDemonstratedMw = 2200.0;
inline constexpr double kThetaWindowDeg = 18.0;
inline constexpr double kQLoadedRecommended = 25000.0;
inline constexpr double kQLoadedDemonstrated = 21800.0;

// Teslameter probe-offset calibration, Gauss native.
inline constexpr double kCalOffsetInGauss = 24.468;
inline constexpr double kCalScale = 1.01886;
inline constexpr double kCalOffsetOutGauss = 26.83;

inline constexpr double kGaussPerMt = 10.0;

// Magnetic-field search window half width around a VNA-wobble estimate.
inline constexpr double kScanHalfWidthMt = 0.5;

// Default bisection tolerance for resonance-field solving. Tighter than the
// 1e-4 mT guarantee so frequency round trips hold to 1e-3 MHz.
inline constexpr double kFieldToleranceMt = 1e-6;

}  // namespace constants
}  // namespace nvmaser
