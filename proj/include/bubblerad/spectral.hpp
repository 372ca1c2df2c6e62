#pragma once

// Form factor, photon spectral density and the frequency-integrated photon
// number and radiated energy of a bubble-radius trajectory.
//
// With D(tau) the dynamic area R^2(tau) - r0^2,
//
//     F(Omega)     = integral dtau D(tau) / c^2 exp(i Omega tau)
//     dN/dOmega    = alpha Omega^5 |F(Omega)|^2
//     N            = integral_0^inf dOmega dN/dOmega
//     E            = integral_0^inf dOmega hbar Omega dN/dOmega
//
// Internally every trajectory is reduced to a normalized profile p(u) with
// max |p| = 1 on a dimensionless time u = (tau - center) / t_char, so that
// D / c^2 = A p(u) and F(Omega) = A t_char exp(i Omega center) Fhat(Omega t_char).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <optional>
#include <variant>
#include <vector>

#include "closed_form.hpp"
#include "concurrency.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "trajectory.hpp"
#include "units.hpp"

namespace bubblerad {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-30;
    std::size_t max_panels = 1000000;
    /// Minimum number of panels per oscillation period 2 pi / Omega.
    unsigned oscillation_resolution = 8;
    /// The outer frequency integral stops once a doubling interval adds
    /// less than this fraction of the accumulated total.
    double tail_rel_threshold = 1e-10;
    /// Remove the static r0^2 before transforming. Disabling it is a
    /// diagnostic: the window edges then dominate the high-frequency tail.
    bool subtract_baseline = true;
    /// Sampled data only: if the last octave below the sampling Nyquist
    /// frequency still carries more than this fraction of N, the spectrum
    /// is not resolved and the integral is rejected.
    double aliasing_rel_threshold = 1e-3;

    void validate() const {
        if (!(rel_tol > 0.0 && abs_tol > 0.0 && tail_rel_threshold > 0.0 && aliasing_rel_threshold > 0.0))
            throw invalid_argument("quadrature tolerances must be positive");
        if (!(std::isfinite(rel_tol) && std::isfinite(abs_tol) && std::isfinite(tail_rel_threshold)))
            throw invalid_argument("quadrature tolerances must be finite");
        if (oscillation_resolution < 4)
            throw invalid_argument("oscillation_resolution must be at least 4");
        if (max_panels < 1)
            throw invalid_argument("max_panels must be at least 1");
    }
};

struct FormFactor {
    std::complex<double> value;  // s^3
    double error = 0.0;          // s^3
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct Spectrum {
    std::vector<double> omegas;     // rad/s
    std::vector<double> densities;  // dN/dOmega, s
    double peak_omega = 0.0;        // rad/s
    double mean_omega = 0.0;        // rad/s
    double total = 0.0;             // grid integral of the density
};

struct YieldResult {
    double photon_number = 0.0;
    double radiated_energy = 0.0;  // J
    double v_max = 0.0;            // m/s
    double beta_effective = 0.0;
    double bound_value = 0.0;
    bool supraluminal = false;
    double quadrature_error_estimate = 0.0;  // absolute, on photon_number
};

namespace detail {

// C3 step from 0 (x <= 0) to 1 (x >= 1).
inline double smooth_step(double x) {
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double x2 = x * x;
    return x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

struct FourierHat {
    std::complex<double> value;
    double error = 0.0;
    double abs_integral = 0.0;
};

// Normalized moments: integrals of w^5 |Fhat|^2 and w^6 |Fhat|^2.
struct MomentsHat {
    double m5 = 0.0;
    double m6 = 0.0;
    double m5_error = 0.0;
    double m6_error = 0.0;
};

}  // namespace detail

/// A trajectory prepared for spectral evaluation. Construction does the
/// O(n) preprocessing once; all queries are const and thread-safe.
class SpectralModel {
public:
    /// Half-width of the directly integrated core for unbounded profiles;
    /// beyond it the transform is summed over half-periods and extrapolated.
    static constexpr double core_half_width = 10.0;
    static constexpr std::size_t max_tail_cycles = 5000;
    static constexpr std::size_t max_doublings = 64;

    SpectralModel(const Trajectory& traj, const QuadratureSettings& settings) : settings_(settings) {
        settings_.validate();
        std::visit([this](const auto& v) { prepare(v); }, traj);
    }

    const QuadratureSettings& settings() const { return settings_; }
    bool is_static() const { return zero_; }
    double time_scale() const { return t_char_; }
    double center() const { return center_; }
    /// Peak |D| / c^2, s^2.
    double amplitude() const { return amplitude_; }
    /// Frequency above which the integrand is not resolved (rad/s); infinite
    /// for analytic trajectories.
    double omega_cap() const { return omega_cap_hat_ / t_char_; }

    /// Normalized profile value at dimensionless time u.
    double profile(double u) const { return shape_(u); }

    FormFactor form_factor(double omega) const {
        if (!(omega >= 0.0) || !std::isfinite(omega))
            throw invalid_argument("form_factor: omega must be finite and non-negative");
        if (zero_)
            return {};
        const auto f = fourier_hat(omega * t_char_, inner_rel_tol());
        const double scale = amplitude_ * t_char_;
        const std::complex<double> phase = std::polar(1.0, omega * center_);
        return {scale * phase * f.value, scale * f.error};
    }

    /// alpha Omega^5 |F|^2, in s.
    double spectral_density(double omega, double alpha) const {
        if (zero_ || omega == 0.0)
            return 0.0;
        const double mag = std::abs(form_factor(omega).value);
        const double o2 = omega * omega;
        return alpha * o2 * o2 * omega * mag * mag;
    }

    Estimate photon_number(double alpha) const {
        const auto m = moments();
        const double k = alpha * (amplitude_ / (t_char_ * t_char_)) * (amplitude_ / (t_char_ * t_char_));
        return {k * m.m5, k * m.m5_error};
    }

    Estimate radiated_energy(double alpha) const {
        const auto m = moments();
        const double k = alpha * (amplitude_ / (t_char_ * t_char_)) * (amplitude_ / (t_char_ * t_char_)) *
                         PhysicalConstants::hbar / t_char_;
        return {k * m.m6, k * m.m6_error};
    }

    /// Both frequency moments from one outer integration.
    std::pair<Estimate, Estimate> photon_number_and_energy(double alpha) const {
        const auto m = moments();
        const double k = alpha * (amplitude_ / (t_char_ * t_char_)) * (amplitude_ / (t_char_ * t_char_));
        const double ke = k * PhysicalConstants::hbar / t_char_;
        return {{k * m.m5, k * m.m5_error}, {ke * m.m6, ke * m.m6_error}};
    }

    detail::MomentsHat moments() const {
        detail::MomentsHat out;
        if (zero_)
            return out;
        const double inner_tol = inner_rel_tol();
        auto integrand = [&](double w) {
            Vec<4> r;
            if (w == 0.0)
                return r;
            const auto f = fourier_hat(w, inner_tol);
            const double mag = std::abs(f.value);
            const double w2 = w * w;
            const double w5 = w2 * w2 * w;
            const double dens_err = 2.0 * mag * f.error + f.error * f.error;
            r[0] = w5 * mag * mag;
            r[1] = w5 * w * mag * mag;
            r[2] = w5 * dens_err;
            r[3] = w5 * w * dens_err;
            return r;
        };

        CompensatedSum m5, m6, e5, e6;
        double lo = 0.0;
        double hi = 1.0;
        for (std::size_t i = 0; i < max_doublings; ++i) {
            const bool capped = hi >= omega_cap_hat_;
            if (capped)
                hi = omega_cap_hat_;
            AdaptiveOptions opt;
            opt.rel_tol = settings_.rel_tol;
            opt.abs_tol = std::max(settings_.abs_tol, settings_.rel_tol * m5.value());
            opt.max_panels = settings_.max_panels;
            opt.controlled_components = 1;
            const auto r = integrate_adaptive<Vec<4>>(integrand, lo, hi, opt);
            m5 += r.value[0];
            m6 += r.value[1];
            e5 += r.error[0] + r.value[2];
            e6 += r.error[1] + r.value[3];
            const double total5 = m5.value();
            const double total6 = m6.value();
            if (capped) {
                // Last octave below the cap measures how much of N sits
                // near the resolution limit.
                const double octave_lo = 0.5 * hi;
                double octave = r.value[0];
                if (lo > octave_lo) {
                    const auto extra = integrate_adaptive<Vec<4>>(integrand, octave_lo, lo, opt);
                    octave += extra.value[0];
                }
                if (octave > settings_.aliasing_rel_threshold * total5)
                    throw numerical_error("spectrum not resolved below the sampling Nyquist frequency "
                                          "(undersampled or noisy trajectory)",
                                          octave / std::max(total5, std::numeric_limits<double>::min()));
                e5 += r.value[0];
                e6 += r.value[1];
                return finish(out, m5, m6, e5, e6);
            }
            const bool small5 = r.value[0] <= settings_.tail_rel_threshold * total5;
            const bool small6 = r.value[1] <= settings_.tail_rel_threshold * total6;
            if (small5 && small6) {
                // The truncated remainder is bounded by the last interval.
                e5 += r.value[0];
                e6 += r.value[1];
                return finish(out, m5, m6, e5, e6);
            }
            lo = hi;
            hi *= 2.0;
        }
        throw numerical_error("spectral tail not decaying; the photon-number integral does not converge",
                              std::numeric_limits<double>::infinity());
    }

private:
    static detail::MomentsHat& finish(detail::MomentsHat& out, const CompensatedSum& m5, const CompensatedSum& m6,
                                      const CompensatedSum& e5, const CompensatedSum& e6) {
        out.m5 = m5.value();
        out.m6 = m6.value();
        out.m5_error = e5.value();
        out.m6_error = e6.value();
        return out;
    }

    // The inner transform is resolved well below the outer tolerance so
    // that its noise does not stall refinement of the outer integral.
    double inner_rel_tol() const { return std::max(settings_.rel_tol * 1e-2, 1e-15); }

    void prepare(const LorentzianPulse& p) {
        t_char_ = p.gamma();
        center_ = p.center();
        if (settings_.subtract_baseline) {
            amplitude_ = p.depth() / (PhysicalConstants::c * PhysicalConstants::c);
            shape_ = [](double u) { return LorentzianPulse::shape(u); };
            lo_ = -std::numeric_limits<double>::infinity();
            hi_ = std::numeric_limits<double>::infinity();
            even_ = true;
        } else {
            // Raw R^2 over the window [0, T], normalized by r0^2.
            amplitude_ = p.r0() * p.r0() / (PhysicalConstants::c * PhysicalConstants::c);
            const double depth_ratio = p.depth() / (p.r0() * p.r0());
            shape_ = [depth_ratio](double u) { return 1.0 + depth_ratio * LorentzianPulse::shape(u); };
            hi_ = 0.5 * p.period() / p.gamma();
            lo_ = -hi_;
            even_ = false;
        }
    }

    void prepare(const TabulatedTrajectory& tab) {
        // The shape closure shares ownership of the samples so copies of
        // the model stay valid.
        auto owned = std::make_shared<const TabulatedTrajectory>(tab);
        const auto& s = owned->samples();
        const double t0 = s.front().t;
        const double t1 = s.back().t;
        const std::size_t edge = TabulatedTrajectory::edge_count(s.size());
        const double zone_lo = s[edge].t - t0;
        const double zone_hi = t1 - s[s.size() - 1 - edge].t;
        const double c2 = PhysicalConstants::c * PhysicalConstants::c;
        const auto width = dip_width(*owned);
        if (settings_.subtract_baseline) {
            if (width.depth == 0.0) {
                zero_ = true;
                t_char_ = 0.5 * (t1 - t0);
                center_ = 0.5 * (t0 + t1);
                return;
            }
            t_char_ = width.half_width;
            center_ = width.center;
            amplitude_ = width.depth / c2;
            const double inv_depth = 1.0 / width.depth;
            shape_ = [owned, tc = t_char_, cc = center_, t0, t1, zone_lo, zone_hi, inv_depth](double u) {
                const double t = cc + tc * u;
                const double taper = detail::smooth_step((t - t0) / zone_lo) * detail::smooth_step((t1 - t) / zone_hi);
                if (taper == 0.0)
                    return 0.0;
                return owned->dynamic_area_at(t) * taper * inv_depth;
            };
        } else {
            double rmax = 0.0;
            for (const auto& x : s) rmax = std::max(rmax, x.r);
            t_char_ = width.half_width > 0.0 ? width.half_width : 0.5 * (t1 - t0);
            center_ = width.depth > 0.0 ? width.center : 0.5 * (t0 + t1);
            amplitude_ = rmax * rmax / c2;
            const double inv = 1.0 / (rmax * rmax);
            shape_ = [owned, tc = t_char_, cc = center_, inv](double u) {
                const double r = owned->radius_at(cc + tc * u);
                return r * r * inv;
            };
        }
        lo_ = (t0 - center_) / t_char_;
        hi_ = (t1 - center_) / t_char_;
        even_ = false;
        // The interpolant is only C1 at the knots, so panels start on them.
        breaks_.clear();
        breaks_.reserve(s.size());
        for (const auto& x : s) breaks_.push_back((x.t - center_) / t_char_);
        breaks_.front() = lo_;
        breaks_.back() = hi_;
        omega_cap_hat_ = std::numbers::pi * t_char_ / owned->min_spacing();
    }

    AdaptiveOptions inner_options(double w, double rel_tol) const {
        AdaptiveOptions opt;
        opt.rel_tol = rel_tol;
        opt.abs_tol = settings_.abs_tol;
        opt.max_panels = settings_.max_panels;
        if (w > 0.0)
            opt.max_panel_width = 2.0 * std::numbers::pi / w / static_cast<double>(settings_.oscillation_resolution);
        return opt;
    }

    // Fhat(w) = integral p(u) exp(i w u) du over the support.
    detail::FourierHat fourier_hat(double w, double rel_tol) const {
        const auto opt = inner_options(w, rel_tol);
        auto osc = [this, w](double u) {
            const double f = shape_(u);
            return std::complex<double>(f * std::cos(w * u), f * std::sin(w * u));
        };
        auto cosine = [this, w](double u) { return shape_(u) * std::cos(w * u); };

        if (!breaks_.empty()) {
            const auto r = integrate_adaptive<std::complex<double>>(osc, std::span<const double>(breaks_), opt);
            return {r.value, r.error, r.abs_integral};
        }
        if (std::isfinite(lo_) && std::isfinite(hi_)) {
            const auto r = integrate_adaptive<std::complex<double>>(osc, lo_, hi_, opt);
            return {r.value, r.error, r.abs_integral};
        }

        const double core = core_half_width;
        detail::FourierHat out;
        if (even_) {
            const auto r = integrate_adaptive<double>(cosine, 0.0, core, opt);
            out.value = 2.0 * r.value;
            out.error = 2.0 * r.error;
            out.abs_integral = 2.0 * r.abs_integral;
        } else {
            const auto r = integrate_adaptive<std::complex<double>>(osc, -core, core, opt);
            out.value = r.value;
            out.error = r.error;
            out.abs_integral = r.abs_integral;
        }

        // Right tail, then the mirrored left tail unless the profile is even.
        const int sides = even_ ? 1 : 2;
        for (int side = 0; side < sides; ++side) {
            const double sign = side == 0 ? 1.0 : -1.0;
            const double mult = even_ ? 2.0 : 1.0;
            const auto tail = tail_integral(w, sign, opt, out);
            out.value += mult * tail.value;
            out.error += mult * tail.error;
            out.abs_integral += mult * tail.abs_integral;
        }
        return out;
    }

    // integral_{core}^{inf} p(sign v) exp(i sign w v) dv (the cosine part
    // only for even profiles).
    detail::FourierHat tail_integral(double w, double sign, const AdaptiveOptions& opt,
                                     const detail::FourierHat& so_far) const {
        const double core = core_half_width;
        detail::FourierHat out;
        if (w == 0.0) {
            // v = core / t maps [core, inf) onto (0, 1].
            auto mapped = [this, sign, core](double t) {
                const double v = core / t;
                return shape_(sign * v) * core / (t * t);
            };
            AdaptiveOptions o = opt;
            o.max_panel_width = std::numeric_limits<double>::infinity();
            const auto r = integrate_adaptive<double>(mapped, 0.0, 1.0, o);
            return {r.value, r.error, r.abs_integral};
        }

        const double half_period = std::numbers::pi / w;
        WynnEpsilon wynn;
        std::complex<double> partial{};
        double quad_error = 0.0;
        std::complex<double> estimate{};
        for (std::size_t k = 0; k < max_tail_cycles; ++k) {
            const double a = core + static_cast<double>(k) * half_period;
            const double b = a + half_period;
            std::complex<double> piece;
            if (even_) {
                auto f = [this, w](double v) { return shape_(v) * std::cos(w * v); };
                const auto r = integrate_adaptive<double>(f, a, b, opt);
                piece = r.value;
                quad_error += r.error;
                out.abs_integral += r.abs_integral;
            } else {
                auto f = [this, w, sign](double v) {
                    const double p = shape_(sign * v);
                    return std::complex<double>(p * std::cos(w * v), sign * p * std::sin(w * v));
                };
                const auto r = integrate_adaptive<std::complex<double>>(f, a, b, opt);
                piece = r.value;
                quad_error += r.error;
                out.abs_integral += r.abs_integral;
            }
            partial += piece;
            estimate = wynn.add(partial);
            if (piece == std::complex<double>{} && k > 0) {
                // Profile vanished identically.
                out.value = partial;
                out.error = quad_error;
                return out;
            }
            if (k >= 3) {
                const double total_abs = so_far.abs_integral + out.abs_integral;
                const double magnitude = std::abs(so_far.value + estimate);
                const double tol = std::max({opt.abs_tol, opt.rel_tol * magnitude, roundoff_factor * total_abs});
                if (wynn.error_estimate() <= 0.5 * tol) {
                    out.value = estimate;
                    out.error = wynn.error_estimate() + quad_error;
                    return out;
                }
            }
        }
        throw numerical_error("oscillatory tail extrapolation did not converge", wynn.error_estimate());
    }

    QuadratureSettings settings_;
    std::function<double(double)> shape_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<double> breaks_;
    bool even_ = false;
    bool zero_ = false;
    double t_char_ = 1.0;
    double center_ = 0.0;
    double amplitude_ = 0.0;
    double omega_cap_hat_ = std::numeric_limits<double>::infinity();
};

inline FormFactor form_factor(const Trajectory& traj, double omega, const QuadratureSettings& settings = {}) {
    return SpectralModel(traj, settings).form_factor(omega);
}

inline double spectral_density(const Trajectory& traj, double omega, const QuadratureSettings& settings = {},
                               const PhysicalConstants& constants = {}) {
    constants.validate();
    if (!(omega >= 0.0))
        throw invalid_argument("spectral_density: omega must be non-negative");
    return SpectralModel(traj, settings).spectral_density(omega, constants.alpha);
}

inline Estimate photon_number(const Trajectory& traj, const QuadratureSettings& settings = {},
                              const PhysicalConstants& constants = {}) {
    constants.validate();
    return SpectralModel(traj, settings).photon_number(constants.alpha);
}

inline Estimate radiated_energy(const Trajectory& traj, const QuadratureSettings& settings = {},
                                const PhysicalConstants& constants = {}) {
    constants.validate();
    return SpectralModel(traj, settings).radiated_energy(constants.alpha);
}

/// dN/dOmega on a uniform grid of `points` frequencies over [0, omega_max],
/// with the peak refined by golden-section search and the mean frequency
/// taken as first moment / total of the (trapezoidal) grid integral.
inline Spectrum spectrum_table(const Trajectory& traj, double omega_max, std::size_t points,
                               const QuadratureSettings& settings = {}, const PhysicalConstants& constants = {},
                               std::size_t jobs = 1) {
    constants.validate();
    if (points < 2)
        throw invalid_argument("spectrum_table: need at least 2 points");
    if (!(omega_max > 0.0 && std::isfinite(omega_max)))
        throw invalid_argument("spectrum_table: omega_max must be positive and finite");
    const SpectralModel model(traj, settings);
    Spectrum s;
    s.omegas.resize(points);
    s.densities.assign(points, 0.0);
    for (std::size_t i = 0; i < points; ++i)
        s.omegas[i] = omega_max * static_cast<double>(i) / static_cast<double>(points - 1);
    parallel_for(points, jobs, [&](std::size_t i) { s.densities[i] = model.spectral_density(s.omegas[i], constants.alpha); });

    CompensatedSum total, first;
    for (std::size_t i = 0; i + 1 < points; ++i) {
        const double h = s.omegas[i + 1] - s.omegas[i];
        total += 0.5 * h * (s.densities[i] + s.densities[i + 1]);
        first += 0.5 * h * (s.omegas[i] * s.densities[i] + s.omegas[i + 1] * s.densities[i + 1]);
    }
    s.total = total.value();
    s.mean_omega = s.total > 0.0 ? first.value() / s.total : 0.0;

    const auto it = std::max_element(s.densities.begin(), s.densities.end());
    const std::size_t k = static_cast<std::size_t>(it - s.densities.begin());
    if (*it > 0.0) {
        const double lo = s.omegas[k > 0 ? k - 1 : 0];
        const double hi = s.omegas[std::min(k + 1, points - 1)];
        auto dens = [&](double w) { return model.spectral_density(w, constants.alpha); };
        const auto g = golden_section_maximize(dens, lo, hi, 1e-10);
        s.peak_omega = g.value >= *it ? g.x : s.omegas[k];
    } else {
        s.peak_omega = 0.0;
    }
    return s;
}

/// Effective beta: exact for the Lorentzian; for sampled data
/// sqrt(max |D|) / (c gamma_fit) with gamma_fit the half-width at half depth.
inline double effective_beta(const Trajectory& traj) {
    if (const auto* p = std::get_if<LorentzianPulse>(&traj))
        return beta(*p);
    const auto w = dip_width(std::get<TabulatedTrajectory>(traj));
    if (w.depth == 0.0 || w.half_width == 0.0)
        return 0.0;
    return std::sqrt(w.depth) / (PhysicalConstants::c * w.half_width);
}

inline YieldResult evaluate(const Trajectory& traj, const PhysicalConstants& constants = {},
                            const QuadratureSettings& settings = {}) {
    constants.validate();
    YieldResult r;
    const SpectralModel model(traj, settings);
    r.v_max = max_surface_velocity(traj);
    r.beta_effective = effective_beta(traj);
    r.bound_value = velocity_bound(r.v_max);
    r.supraluminal = r.v_max >= PhysicalConstants::c;
    if (!model.is_static()) {
        const auto [n, e] = model.photon_number_and_energy(constants.alpha);
        r.photon_number = n.value;
        r.radiated_energy = e.value;
        r.quadrature_error_estimate = n.error;
    }
    return r;
}

}  // namespace bubblerad
