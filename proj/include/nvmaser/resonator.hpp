#pragma once

// Resonator characterization: Q-circle fit of complex S11 traces and
// axisymmetric |H|^2 mode-volume integration.
//
// The one-port reflection of a single resonance traces a circle in the
// complex plane,
//   Gamma(f) = Gamma_d * [1 - (2*beta/(1+beta)) / (1 + 2j*Q_L*(f-f0)/f0)],
// and the position angle around the circle centre follows
//   psi(f) = psi0 - 2*atan(2*Q_L*(f-f0)/f0).
// fit_q_circle fits the circle algebraically, then fits the unwrapped phase
// against that model. The circle is fitted rather than the |S11| dip, so an
// asymmetric magnitude dip does not bias the result.
//
// Pure functions over immutable inputs; concurrent use is safe.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "nvmaser/errors.hpp"
#include "nvmaser/linalg.hpp"

namespace nvmaser {

struct S11Point {
    double freq_hz = 0.0;
    std::complex<double> reflection;
};

struct S11Trace {
    std::vector<S11Point> points;

    static S11Trace from_points(std::vector<S11Point> pts) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i];
            if (!std::isfinite(p.freq_hz) || !std::isfinite(p.reflection.real()) ||
                !std::isfinite(p.reflection.imag())) {
                throw invalid_input_error("S11 trace contains non-finite values");
            }
            if (std::abs(p.reflection) > 1.0 + 1e-6) {
                throw invalid_input_error("S11 reflection magnitude exceeds 1 at " +
                                          std::to_string(p.freq_hz) + " Hz");
            }
            if (i > 0 && !(p.freq_hz > pts[i - 1].freq_hz)) {
                throw invalid_input_error("S11 trace frequencies must be strictly increasing");
            }
        }
        return S11Trace{std::move(pts)};
    }
};

enum class CouplingRegime { undercoupled, critical, overcoupled };

inline const char* to_string(CouplingRegime r) {
    switch (r) {
        case CouplingRegime::undercoupled: return "undercoupled";
        case CouplingRegime::critical: return "critical";
        case CouplingRegime::overcoupled: return "overcoupled";
    }
    return "?";
}

struct QCircleFit {
    double f0_hz = 0.0;
    double q_loaded = 0.0;
    double coupling_beta = 0.0;
    double f1_hz = 0.0;  // lower half-power frequency
    double f2_hz = 0.0;  // upper half-power frequency
    CouplingRegime regime = CouplingRegime::undercoupled;
};

namespace detail {

struct Circle {
    double cx = 0.0, cy = 0.0, radius = 0.0;
};

// Algebraic least-squares circle (Kasa) on mean-centred data. Collinear or
// coincident points leave the covariance singular.
inline Circle fit_circle(const std::vector<S11Point>& pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p.reflection.real();
        my += p.reflection.imag();
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0, sxz = 0.0, syz = 0.0, sz = 0.0;
    for (const auto& p : pts) {
        const double x = p.reflection.real() - mx;
        const double y = p.reflection.imag() - my;
        const double z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sxz += x * z;
        syz += y * z;
        sz += z;
    }
    const double det = sxx * syy - sxy * sxy;
    const double scale = sxx + syy;
    if (!(det > 1e-12 * scale * scale) || scale <= 0.0) {
        throw computation_error("degenerate circle: S11 samples are collinear or coincident");
    }
    // minimize sum (z + D x + E y + F)^2; centred data decouples F
    const double dcoef = (sxy * syz - syy * sxz) / det;
    const double ecoef = (sxy * sxz - sxx * syz) / det;
    const double fcoef = -sz / n;
    Circle c;
    c.cx = -dcoef / 2.0 + mx;
    c.cy = -ecoef / 2.0 + my;
    const double r2 = dcoef * dcoef / 4.0 + ecoef * ecoef / 4.0 - fcoef;
    if (!(r2 > 0.0)) throw computation_error("degenerate circle: non-positive radius");
    c.radius = std::sqrt(r2);
    if (c.radius < 1e-9) throw computation_error("degenerate circle: vanishing radius");
    return c;
}

// Position angles around the circle centre, unwrapped to a continuous curve.
inline std::vector<double> unwrapped_phase(const std::vector<S11Point>& pts, const Circle& c) {
    std::vector<double> psi(pts.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double raw = std::atan2(pts[i].reflection.imag() - c.cy,
                                      pts[i].reflection.real() - c.cx);
        if (i > 0) {
            double prev = psi[i - 1];
            double cur = raw + offset;
            while (cur - prev > M_PI) {
                offset -= 2.0 * M_PI;
                cur -= 2.0 * M_PI;
            }
            while (prev - cur > M_PI) {
                offset += 2.0 * M_PI;
                cur += 2.0 * M_PI;
            }
            psi[i] = cur;
        } else {
            psi[i] = raw;
        }
    }
    return psi;
}

struct PhaseFit {
    double psi0 = 0.0;
    double q_loaded = 0.0;
    double f0_hz = 0.0;
};

// Damped Gauss-Newton fit of psi(f) = psi0 - 2*atan(2*Q*(f-f0)/f0).
// Q is iterated in log space to stay positive.
inline PhaseFit fit_phase(const std::vector<double>& freq, const std::vector<double>& psi) {
    const std::size_t n = freq.size();

    // initial guesses from the steepest phase slope
    std::size_t steepest = 1;
    double best_slope = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double df = freq[i + 1] - freq[i - 1];
        const double slope = std::fabs((psi[i + 1] - psi[i - 1]) / df);
        if (slope > best_slope) {
            best_slope = slope;
            steepest = i;
        }
    }
    PhaseFit p;
    p.f0_hz = freq[steepest];
    p.psi0 = psi[steepest];
    p.q_loaded = std::max(1.0, best_slope * p.f0_hz / 4.0);
    if (!(best_slope > 0.0)) {
        throw computation_error("flat phase response: no resonance in trace");
    }

    const auto sse_of = [&](const PhaseFit& c) {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2.0 * c.q_loaded * (freq[i] - c.f0_hz) / c.f0_hz;
            const double r = psi[i] - (c.psi0 - 2.0 * std::atan(t));
            sse += r * r;
        }
        return sse;
    };

    double lambda = 1e-3;
    double sse = sse_of(p);
    for (int iter = 0; iter < 100; ++iter) {
        // normal equations in (psi0, log Q, f0)
        Mat3 jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2.0 * p.q_loaded * (freq[i] - p.f0_hz) / p.f0_hz;
            const double denom = 1.0 + t * t;
            const double r = psi[i] - (p.psi0 - 2.0 * std::atan(t));
            const std::array<double, 3> j{
                1.0,
                -2.0 * t / denom,                                            // d/d(log Q)
                4.0 * p.q_loaded * freq[i] / (p.f0_hz * p.f0_hz * denom)};   // d/d(f0)
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        // column scaling keeps the psi0 / log-Q / f0 blocks comparable
        std::array<double, 3> col{};
        for (int a = 0; a < 3; ++a) col[a] = jtj[a][a] > 0.0 ? std::sqrt(jtj[a][a]) : 1.0;
        bool stepped = false;
        for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
            Mat3 damped{};
            std::array<double, 3> rhs{};
            for (int a = 0; a < 3; ++a) {
                rhs[a] = jtr[a] / col[a];
                for (int b = 0; b < 3; ++b) damped[a][b] = jtj[a][b] / (col[a] * col[b]);
                damped[a][a] *= 1.0 + lambda;
            }
            std::array<double, 3> dx{};
            if (!solve3(damped, rhs, dx)) {
                lambda *= 10.0;
                continue;
            }
            for (int a = 0; a < 3; ++a) dx[a] /= col[a];
            PhaseFit trial = p;
            trial.psi0 += dx[0];
            trial.q_loaded *= std::exp(std::clamp(dx[1], -2.0, 2.0));
            trial.f0_hz += dx[2];
            if (!(trial.f0_hz > 0.0) || !std::isfinite(trial.f0_hz)) {
                lambda *= 10.0;
                continue;
            }
            const double trial_sse = sse_of(trial);
            if (trial_sse <= sse) {
                const double rel = std::fabs(dx[2]) / p.f0_hz + std::fabs(dx[1]);
                p = trial;
                sse = trial_sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (rel < 1e-13) return p;
            } else {
                lambda *= 10.0;
            }
        }
        if (!stepped) break;
    }
    return p;
}

}  // namespace detail

// Loaded bandwidth f0 / Q_L.
inline double bandwidth(double f0_hz, double q_loaded) {
    if (!std::isfinite(f0_hz) || f0_hz <= 0.0) {
        throw invalid_input_error("resonant frequency must be positive");
    }
    if (!std::isfinite(q_loaded) || q_loaded <= 0.0) {
        throw invalid_input_error("loaded Q must be positive");
    }
    return f0_hz / q_loaded;
}

inline QCircleFit fit_q_circle(const S11Trace& trace) {
    if (trace.points.size() < 8) {
        throw invalid_input_error("Q-circle fit needs at least 8 trace points");
    }
    const detail::Circle circle = detail::fit_circle(trace.points);
    std::vector<double> freq(trace.points.size());
    for (std::size_t i = 0; i < trace.points.size(); ++i) freq[i] = trace.points[i].freq_hz;
    const std::vector<double> psi = detail::unwrapped_phase(trace.points, circle);

    // a trace that covers the resonance sweeps at least a quarter turn of
    // the circle; flank-only traces stay well below that
    if (std::fabs(psi.front() - psi.back()) < M_PI / 2.0) {
        throw computation_error("resonance dip not bracketed by the trace");
    }
    const detail::PhaseFit phase = detail::fit_phase(freq, psi);

    if (!(phase.f0_hz > freq.front() && phase.f0_hz < freq.back())) {
        throw computation_error("resonance dip not bracketed by the trace");
    }

    QCircleFit fit;
    fit.f0_hz = phase.f0_hz;
    fit.q_loaded = phase.q_loaded;

    // Off-resonance point sits diametrically opposite the resonance point;
    // its distance from the origin normalizes the circle diameter into the
    // coupling coefficient.
    const double res_x = circle.cx + circle.radius * std::cos(phase.psi0);
    const double res_y = circle.cy + circle.radius * std::sin(phase.psi0);
    const double off_x = 2.0 * circle.cx - res_x;
    const double off_y = 2.0 * circle.cy - res_y;
    const double gamma_d = std::hypot(off_x, off_y);
    if (!(gamma_d - circle.radius > 1e-12)) {
        throw computation_error("coupling unresolvable: detuned point inside the Q-circle");
    }
    fit.coupling_beta = circle.radius / (gamma_d - circle.radius);

    const double half = 1.0 / (2.0 * fit.q_loaded);
    fit.f1_hz = fit.f0_hz * (1.0 - half);
    fit.f2_hz = fit.f0_hz * (1.0 + half);

    constexpr double kCriticalBand = 1e-6;
    if (std::fabs(fit.coupling_beta - 1.0) <= kCriticalBand) {
        fit.regime = CouplingRegime::critical;
    } else {
        fit.regime = fit.coupling_beta < 1.0 ? CouplingRegime::undercoupled
                                             : CouplingRegime::overcoupled;
    }
    return fit;
}

// --- axisymmetric field maps -----------------------------------------------

// Rectangular (r, z) grid of |H|^2 samples, axes ascending.
struct FieldMap {
    std::vector<double> r_mm;                // size nr
    std::vector<double> z_mm;                // size nz
    std::vector<double> h2;                  // nr * nz, index iz * nr + ir

    double at(std::size_t ir, std::size_t iz) const { return h2[iz * r_mm.size() + ir]; }

    static FieldMap from_grid(std::vector<double> r, std::vector<double> z,
                              std::vector<double> values) {
        if (r.empty() || z.empty() || values.size() != r.size() * z.size()) {
            throw invalid_input_error("field map is not a full rectangular grid");
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!std::isfinite(r[i]) || r[i] < 0.0) {
                throw invalid_input_error("field map radii must be finite and non-negative");
            }
            if (i > 0 && !(r[i] > r[i - 1])) {
                throw invalid_input_error("field map r axis must be strictly increasing");
            }
        }
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (!std::isfinite(z[i])) throw invalid_input_error("field map z axis must be finite");
            if (i > 0 && !(z[i] > z[i - 1])) {
                throw invalid_input_error("field map z axis must be strictly increasing");
            }
        }
        for (double v : values) {
            if (!std::isfinite(v) || v < 0.0) {
                throw invalid_input_error("field map |H|^2 samples must be finite and >= 0");
            }
        }
        return FieldMap{std::move(r), std::move(z), std::move(values)};
    }
};

struct ModeVolumeResult {
    double v_mode_cm3 = 0.0;
    double hotspot_r_mm = 0.0;
    double hotspot_z_mm = 0.0;
};

// Grid node of maximum |H|^2; ties broken by smallest z, then smallest r.
inline std::pair<double, double> hotspot(const FieldMap& map) {
    double best = -1.0;
    std::size_t best_ir = 0, best_iz = 0;
    for (std::size_t iz = 0; iz < map.z_mm.size(); ++iz) {
        for (std::size_t ir = 0; ir < map.r_mm.size(); ++ir) {
            if (map.at(ir, iz) > best) {
                best = map.at(ir, iz);
                best_ir = ir;
                best_iz = iz;
            }
        }
    }
    if (!(best > 0.0)) throw computation_error("field map is identically zero");
    return {map.r_mm[best_ir], map.z_mm[best_iz]};
}

// V = (integral of h2 * 2*pi*r dr dz) / max(h2), trapezoidal on the grid.
// Scale invariant in h2; result in cm^3 for mm axes.
inline ModeVolumeResult mode_volume(const FieldMap& map) {
    if (map.r_mm.size() < 2 || map.z_mm.size() < 2) {
        throw invalid_input_error("mode volume needs at least a 2x2 grid");
    }
    const auto [hot_r, hot_z] = hotspot(map);  // also rejects all-zero maps
    double peak = 0.0;
    for (double v : map.h2) peak = std::max(peak, v);

    double integral = 0.0;  // mm^3, in units of h2
    for (std::size_t iz = 0; iz + 1 < map.z_mm.size(); ++iz) {
        const double dz = map.z_mm[iz + 1] - map.z_mm[iz];
        for (std::size_t ir = 0; ir + 1 < map.r_mm.size(); ++ir) {
            const double dr = map.r_mm[ir + 1] - map.r_mm[ir];
            const double g00 = 2.0 * M_PI * map.r_mm[ir] * map.at(ir, iz);
            const double g10 = 2.0 * M_PI * map.r_mm[ir + 1] * map.at(ir + 1, iz);
            const double g01 = 2.0 * M_PI * map.r_mm[ir] * map.at(ir, iz + 1);
            const double g11 = 2.0 * M_PI * map.r_mm[ir + 1] * map.at(ir + 1, iz + 1);
            integral += dr * dz * (g00 + g10 + g01 + g11) / 4.0;
        }
    }

    ModeVolumeResult out;
    out.v_mode_cm3 = integral / peak / 1000.0;  // mm^3 -> cm^3
    out.hotspot_r_mm = hot_r;
    out.hotspot_z_mm = hot_z;
    return out;
}

// Relative Purcell figure of merit Q_L / V_mode.
inline double purcell_fom(double q_loaded, double v_mode_cm3) {
    if (!std::isfinite(q_loaded) || q_loaded <= 0.0 || !std::isfinite(v_mode_cm3) ||
        v_mode_cm3 <= 0.0) {
        throw invalid_input_error("Purcell figure of merit needs positive Q and mode volume");
    }
    return q_loaded / v_mode_cm3;
}

}  // namespace nvmaser
