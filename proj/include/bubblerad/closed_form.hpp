#pragma once

// Closed-form results for the Lorentzian collapse model and the
// maximal-velocity bound. These are the reference values the numerical
// pipeline is checked against.

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "errors.hpp"
#include "units.hpp"

namespace bubblerad {

/// Photon-number coefficient K in N = K alpha beta^4 for the R^2-dip
/// Lorentzian: pi^2 * Gamma(6) / 2^6 = 15 pi^2 / 8. See
/// docs/lorentzian_coefficient.md for both derivations.
inline constexpr double lorentzian_coefficient = 15.0 * std::numbers::pi * std::numbers::pi / 8.0;

/// The coefficient as quoted for the original Lorentzian model, 15 pi^2 / 16.
/// Kept for side-by-side reporting; it differs from the adopted value by 2.
inline constexpr double quoted_lorentzian_coefficient = 15.0 * std::numbers::pi * std::numbers::pi / 16.0;

/// Velocity-bound prefactor in N <= 0.1 (v_max / c)^4.
inline constexpr double velocity_bound_prefactor = 0.1;

/// Minimum period / gamma for which closed-form comparisons are meaningful.
inline constexpr double closed_form_min_period_ratio = 40.0;

/// |F(Omega)| = pi beta^2 gamma^3 exp(-gamma Omega), in s^3.
inline double lorentzian_form_factor_closed(double beta, double gamma, double omega) {
    if (!(beta >= 0.0 && gamma > 0.0 && omega >= 0.0))
        throw invalid_argument("lorentzian_form_factor_closed: need beta >= 0, gamma > 0, omega >= 0");
    return std::numbers::pi * beta * beta * gamma * gamma * gamma * std::exp(-gamma * omega);
}

inline double lorentzian_photon_number(double alpha, double beta, double coefficient = lorentzian_coefficient) {
    if (!(alpha > 0.0 && beta >= 0.0))
        throw invalid_argument("lorentzian_photon_number: need alpha > 0, beta >= 0");
    const double b2 = beta * beta;
    return coefficient * alpha * b2 * b2;
}

/// Pair energy hbar Omega averaged over the exponential spectrum
/// (mean Omega = 3 / gamma) times the photon number, in J.
inline double lorentzian_radiated_energy(double alpha, double beta, double gamma, double hbar = PhysicalConstants::hbar) {
    if (!(gamma > 0.0 && hbar > 0.0))
        throw invalid_argument("lorentzian_radiated_energy: need gamma > 0, hbar > 0");
    return hbar * (3.0 / gamma) * lorentzian_photon_number(alpha, beta);
}

inline double velocity_bound(double v_max, double c = PhysicalConstants::c) {
    if (!(v_max >= 0.0 && c > 0.0))
        throw invalid_argument("velocity_bound: need v_max >= 0, c > 0");
    const double x = v_max / c;
    const double x2 = x * x;
    return velocity_bound_prefactor * x2 * x2;
}

/// Deficit factor observed / predicted; infinite when nothing is predicted.
inline double observed_gap(double n_predicted, double n_observed) {
    if (!(n_observed > 0.0 && n_predicted >= 0.0))
        throw invalid_argument("observed_gap: need n_predicted >= 0, n_observed > 0");
    if (n_predicted == 0.0)
        return std::numeric_limits<double>::infinity();
    return n_observed / n_predicted;
}

struct SpectrumMoments {
    double peak;  // rad/s
    double mean;  // rad/s
};

/// Peak (5 / (2 gamma)) and mean (3 / gamma) of Omega^5 exp(-2 gamma Omega).
inline SpectrumMoments peak_and_mean_omega(double gamma) {
    if (!(gamma > 0.0))
        throw invalid_argument("peak_and_mean_omega: need gamma > 0");
    return {2.5 / gamma, 3.0 / gamma};
}

}  // namespace bubblerad
