#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "interpolation.hpp"
#include "quadrature.hpp"
#include "units.hpp"

namespace bubblerad {

/// Analytic collapse: R^2 dips from r0^2 to rmin^2 with a Lorentzian
/// profile of half-width gamma, centred at period/2:
///
///     R^2(tau) = r0^2 - (r0^2 - rmin^2) gamma^2 / ((tau - T/2)^2 + gamma^2)
///
/// All quantities in SI. The formula is defined for every real tau; the
/// public accessors restrict queries to [0, period].
class LorentzianPulse {
public:
    LorentzianPulse(double r0, double rmin, double gamma, double period)
        : r0_(r0), rmin_(rmin), gamma_(gamma), period_(period) {
        if (!(std::isfinite(r0) && std::isfinite(rmin) && std::isfinite(gamma) && std::isfinite(period)))
            throw invalid_argument("Lorentzian pulse parameters must be finite");
        if (!(rmin > 0.0 && rmin < r0))
            throw invalid_argument("Lorentzian pulse requires 0 < rmin < r0");
        if (!(gamma > 0.0))
            throw invalid_argument("Lorentzian pulse requires gamma > 0");
        if (!(period > 0.0))
            throw invalid_argument("Lorentzian pulse requires period > 0");
    }

    double r0() const { return r0_; }
    double rmin() const { return rmin_; }
    double gamma() const { return gamma_; }
    double period() const { return period_; }
    double center() const { return 0.5 * period_; }
    /// r0^2 - rmin^2
    double depth() const { return (r0_ - rmin_) * (r0_ + rmin_); }

    /// Normalized dip profile as a function of u = (tau - T/2) / gamma.
    static double shape(double u) { return -1.0 / (1.0 + u * u); }

    double dynamic_area_at(double tau) const {
        const double u = (tau - center()) / gamma_;
        return depth() * shape(u);
    }
    double radius_at(double tau) const { return std::sqrt(r0_ * r0_ + dynamic_area_at(tau)); }
    double velocity_at(double tau) const {
        const double u = (tau - center()) / gamma_;
        const double q = 1.0 + u * u;
        // dR^2/dtau = 2 depth u / (gamma q^2)
        const double dr2 = 2.0 * depth() * u / (gamma_ * q * q);
        return dr2 / (2.0 * radius_at(tau));
    }

    friend bool operator==(const LorentzianPulse&, const LorentzianPulse&) = default;

private:
    double r0_;
    double rmin_;
    double gamma_;
    double period_;
};

struct Sample {
    double t;  // s
    double r;  // m

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Sampled radius history R(t) with a monotone cubic interpolant.
class TabulatedTrajectory {
public:
    static constexpr std::size_t min_samples = 8;
    /// Fraction of samples at each end used for the default baseline and
    /// for the edge taper.
    static constexpr double edge_fraction = 0.05;

    explicit TabulatedTrajectory(std::vector<Sample> samples, std::optional<double> baseline_r0 = std::nullopt)
        : samples_(std::move(samples)) {
        if (samples_.size() < min_samples)
            throw invalid_argument("tabulated trajectory needs at least 8 samples");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (!(std::isfinite(s.t) && std::isfinite(s.r)))
                throw invalid_argument("tabulated trajectory samples must be finite");
            if (!(s.r > 0.0))
                throw invalid_argument("tabulated trajectory radii must be positive");
            if (i > 0 && !(s.t > samples_[i - 1].t))
                throw invalid_argument("tabulated trajectory times must be strictly increasing");
        }
        std::vector<double> t(samples_.size()), r(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            t[i] = samples_[i].t;
            r[i] = samples_[i].r;
        }
        interp_ = MonotoneCubic(t, r);
        if (baseline_r0) {
            if (!(std::isfinite(*baseline_r0) && *baseline_r0 > 0.0))
                throw invalid_argument("baseline radius must be finite and positive");
            baseline_ = *baseline_r0;
            baseline_overridden_ = true;
        } else {
            baseline_ = default_baseline(samples_);
        }
    }

    /// Mean radius over the first and last 5% of samples (at least one
    /// sample each). Computed as an offset from the first sample so a
    /// constant trace yields its radius exactly.
    static double default_baseline(const std::vector<Sample>& s) {
        const std::size_t n = edge_count(s.size());
        const double ref = s.front().r;
        CompensatedSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            acc += s[i].r - ref;
            acc += s[s.size() - 1 - i].r - ref;
        }
        return ref + acc.value() / static_cast<double>(2 * n);
    }

    static std::size_t edge_count(std::size_t size) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(edge_fraction * static_cast<double>(size)));
    }

    const std::vector<Sample>& samples() const { return samples_; }
    double baseline_r0() const { return baseline_; }
    bool baseline_overridden() const { return baseline_overridden_; }
    double t_front() const { return samples_.front().t; }
    double t_back() const { return samples_.back().t; }
    const MonotoneCubic& interpolant() const { return interp_; }

    double radius_at(double t) const { return interp_(t); }
    double velocity_at(double t) const { return interp_.derivative(t); }
    double dynamic_area_at(double t) const {
        const double r = interp_(t);
        return (r - baseline_) * (r + baseline_);
    }

    double min_spacing() const {
        double h = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < samples_.size(); ++i) h = std::min(h, samples_[i].t - samples_[i - 1].t);
        return h;
    }

    /// Copy with radii replaced by a local quadratic least-squares fit.
    /// An overridden baseline is kept; a default one is recomputed.
    TabulatedTrajectory smoothed(std::size_t window) const {
        std::vector<double> t(samples_.size()), r(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            t[i] = samples_[i].t;
            r[i] = samples_[i].r;
        }
        const auto rs = smooth_local_quadratic(t, r, window);
        std::vector<Sample> out(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) out[i] = {t[i], rs[i]};
        return TabulatedTrajectory(std::move(out), baseline_overridden_ ? std::optional<double>(baseline_) : std::nullopt);
    }

private:
    std::vector<Sample> samples_;
    MonotoneCubic interp_;
    double baseline_ = 0.0;
    bool baseline_overridden_ = false;
};

using Trajectory = std::variant<LorentzianPulse, TabulatedTrajectory>;

struct TimeDomain {
    double lo;
    double hi;
};

inline TimeDomain domain(const Trajectory& traj) {
    return std::visit(
        [](const auto& v) -> TimeDomain {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LorentzianPulse>)
                return {0.0, v.period()};
            else
                return {v.t_front(), v.t_back()};
        },
        traj);
}

namespace detail {

inline void check_in_domain(const Trajectory& traj, double tau) {
    const auto d = domain(traj);
    if (!(tau >= d.lo && tau <= d.hi))
        throw out_of_domain("time outside trajectory domain");
}

}  // namespace detail

/// R(tau) in metres.
inline double radius(const Trajectory& traj, double tau) {
    detail::check_in_domain(traj, tau);
    return std::visit([tau](const auto& v) { return v.radius_at(tau); }, traj);
}

/// R^2(tau) minus the squared ambient radius (r0 or the tabulated
/// baseline), in m^2.
inline double dynamic_area(const Trajectory& traj, double tau) {
    detail::check_in_domain(traj, tau);
    return std::visit([tau](const auto& v) { return v.dynamic_area_at(tau); }, traj);
}

/// dR/dt in m/s. Tabulated trajectories reject the two end samples, where
/// the interpolant's slope is one-sided.
inline double surface_velocity(const Trajectory& traj, double tau) {
    detail::check_in_domain(traj, tau);
    if (const auto* tab = std::get_if<TabulatedTrajectory>(&traj)) {
        if (tau == tab->t_front() || tau == tab->t_back())
            throw out_of_domain("surface velocity undefined at the ends of tabulated data");
    }
    return std::visit([tau](const auto& v) { return v.velocity_at(tau); }, traj);
}

struct VelocityPeak {
    double tau;    // s
    double speed;  // |dR/dt|, m/s
};

inline constexpr std::size_t default_velocity_scan_points = 4096;

/// Location and value of max |dR/dt| (dense scan followed by
/// golden-section refinement on the bracketing cells).
inline VelocityPeak locate_max_surface_velocity(const Trajectory& traj,
                                                std::size_t scan_points = default_velocity_scan_points) {
    if (scan_points < 3)
        throw invalid_argument("velocity scan needs at least 3 points");
    return std::visit(
        [scan_points](const auto& v) -> VelocityPeak {
            using T = std::decay_t<decltype(v)>;
            std::vector<double> grid;
            if constexpr (std::is_same_v<T, LorentzianPulse>) {
                const double lo = std::max(0.0, v.center() - 10.0 * v.gamma());
                const double hi = std::min(v.period(), v.center() + 10.0 * v.gamma());
                grid.resize(scan_points);
                for (std::size_t i = 0; i < scan_points; ++i)
                    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(scan_points - 1);
            } else {
                // Knots and segment midpoints; the end knots are excluded
                // from evaluation but bound the brackets.
                const auto& s = v.samples();
                for (std::size_t i = 0; i < s.size(); ++i) {
                    grid.push_back(s[i].t);
                    if (i + 1 < s.size())
                        grid.push_back(0.5 * (s[i].t + s[i + 1].t));
                }
            }
            auto speed = [&v](double tau) { return std::abs(v.velocity_at(tau)); };
            const bool tabulated = std::is_same_v<T, TabulatedTrajectory>;
            const std::size_t first = tabulated ? 1 : 0;
            const std::size_t last = tabulated ? grid.size() - 2 : grid.size() - 1;
            std::size_t best = first;
            double best_speed = -1.0;
            for (std::size_t i = first; i <= last; ++i) {
                const double sp = speed(grid[i]);
                if (sp > best_speed) {
                    best_speed = sp;
                    best = i;
                }
            }
            if (best_speed == 0.0)
                return {grid[best], 0.0};
            const double lo = grid[best > 0 ? best - 1 : 0];
            const double hi = grid[std::min(best + 1, grid.size() - 1)];
            const auto refined = golden_section_maximize(speed, lo, hi, 1e-12);
            if (refined.value >= best_speed)
                return {refined.x, refined.value};
            return {grid[best], best_speed};
        },
        traj);
}

inline double max_surface_velocity(const Trajectory& traj) { return locate_max_surface_velocity(traj).speed; }

/// Dimensionless surface-velocity parameter sqrt(r0^2 - rmin^2) / (c gamma).
inline double beta(const LorentzianPulse& pulse) {
    return std::sqrt(pulse.depth()) / (PhysicalConstants::c * pulse.gamma());
}

/// Time for the surface to move `radius_scale` at `velocity_scale`.
inline double characteristic_time(double radius_scale, double velocity_scale) {
    if (!(radius_scale > 0.0 && velocity_scale > 0.0))
        throw invalid_argument("characteristic_time requires positive scales");
    return radius_scale / velocity_scale;
}

struct DipWidth {
    double center;      // time of the extreme |dynamic area|, s
    double half_width;  // half-width at half depth, s
    double depth;       // max |dynamic area|, m^2
};

/// Half-width at half-depth of the dynamic-area dip of sampled data,
/// using linear interpolation for the crossings. A side that never falls
/// below half depth extends to the end of the record. Returns zero depth
/// for a static trace.
inline DipWidth dip_width(const TabulatedTrajectory& tab) {
    const auto& s = tab.samples();
    std::vector<double> d(s.size());
    std::size_t peak = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        d[i] = std::abs(tab.dynamic_area_at(s[i].t));
        if (d[i] > d[peak])
            peak = i;
    }
    if (d[peak] == 0.0)
        return {s[peak].t, 0.0, 0.0};
    const double half = 0.5 * d[peak];
    double left = s.front().t;
    for (std::size_t i = peak; i > 0; --i) {
        if (d[i - 1] <= half) {
            const double f = (d[i] - half) / (d[i] - d[i - 1]);
            left = s[i].t - f * (s[i].t - s[i - 1].t);
            break;
        }
    }
    double right = s.back().t;
    for (std::size_t i = peak; i + 1 < s.size(); ++i) {
        if (d[i + 1] <= half) {
            const double f = (d[i] - half) / (d[i] - d[i + 1]);
            right = s[i].t + f * (s[i + 1].t - s[i].t);
            break;
        }
    }
    return {s[peak].t, 0.5 * (right - left), d[peak]};
}

}  // namespace bubblerad
