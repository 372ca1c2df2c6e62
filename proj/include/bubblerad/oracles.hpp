#pragma once

// Checks that tie the numerical pipeline to the closed forms: the velocity
// bound report and the guards for when a closed-form comparison is fair.

#include <cmath>
#include <numbers>
#include <variant>

#include "closed_form.hpp"
#include "errors.hpp"
#include "spectral.hpp"
#include "trajectory.hpp"
#include "units.hpp"

namespace bubblerad {

struct BoundReport {
    double v_max = 0.0;          // m/s
    double bound_value = 0.0;    // 0.1 (v_max / c)^4
    double photon_number = 0.0;
    double photon_number_error = 0.0;
    double ratio = 0.0;          // photon_number / (v_max / c)^4
    bool satisfied = true;
};

/// Builds the report from already computed pieces. A static trajectory
/// (0 / 0) counts as satisfied with ratio 0.
inline BoundReport make_bound_report(double photon_number, double photon_number_error, double v_max) {
    BoundReport r;
    r.v_max = v_max;
    r.photon_number = photon_number;
    r.photon_number_error = photon_number_error;
    r.bound_value = velocity_bound(v_max);
    const double x = v_max / PhysicalConstants::c;
    const double x4 = (x * x) * (x * x);
    if (x4 == 0.0) {
        r.ratio = 0.0;
        r.satisfied = photon_number <= photon_number_error;
        return r;
    }
    r.ratio = photon_number / x4;
    r.satisfied = photon_number <= r.bound_value + photon_number_error;
    return r;
}

inline BoundReport bound_check(const Trajectory& traj, const PhysicalConstants& constants = {},
                               const QuadratureSettings& settings = {}) {
    const auto y = evaluate(traj, constants, settings);
    return make_bound_report(y.photon_number, y.quadrature_error_estimate, y.v_max);
}

/// Fraction of the dip area that lies outside the period window
/// [0, T]: 1 - (2 / pi) atan(T / (2 gamma)).
inline double window_truncation_fraction(const LorentzianPulse& p) {
    return 1.0 - 2.0 / std::numbers::pi * std::atan(0.5 * p.period() / p.gamma());
}

/// Throws unless the pulse is short enough for closed-form comparison.
inline void require_closed_form_regime(const LorentzianPulse& p) {
    if (p.period() < closed_form_min_period_ratio * p.gamma())
        throw invalid_argument("closed-form comparison requires period >= 40 gamma");
}

/// Numeric photon number next to the closed form for a Lorentzian.
struct ClosedFormComparison {
    double numeric = 0.0;
    double numeric_error = 0.0;
    double closed_form = 0.0;
    double relative_difference = 0.0;
    double window_truncation = 0.0;
};

inline ClosedFormComparison compare_with_closed_form(const LorentzianPulse& p, const PhysicalConstants& constants = {},
                                                     const QuadratureSettings& settings = {}) {
    require_closed_form_regime(p);
    ClosedFormComparison out;
    const auto n = photon_number(p, settings, constants);
    out.numeric = n.value;
    out.numeric_error = n.error;
    out.closed_form = lorentzian_photon_number(constants.alpha, beta(p));
    out.relative_difference = out.closed_form > 0.0 ? std::abs(out.numeric / out.closed_form - 1.0) : std::abs(out.numeric);
    out.window_truncation = window_truncation_fraction(p);
    return out;
}

/// Lorentzian with rmin / r0 = x and half-width gamma whose peak surface
/// speed equals v_target. v_max scales linearly with r0 at fixed x and
/// gamma, so one probe evaluation fixes the radius.
inline LorentzianPulse lorentzian_with_peak_speed(double v_target, double x, double gamma, double period_ratio = 100.0) {
    if (!(v_target > 0.0 && x > 0.0 && x < 1.0 && gamma > 0.0 && period_ratio > 0.0))
        throw invalid_argument("lorentzian_with_peak_speed: need v > 0, 0 < x < 1, gamma > 0");
    const double r_probe = 1e-6;
    const LorentzianPulse probe(r_probe, x * r_probe, gamma, period_ratio * gamma);
    const double v_probe = max_surface_velocity(probe);
    const double r0 = r_probe * v_target / v_probe;
    return LorentzianPulse(r0, x * r0, gamma, period_ratio * gamma);
}

}  // namespace bubblerad
