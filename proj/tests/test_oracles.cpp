#include <bubblerad/oracles.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace bubblerad;

namespace {

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

// Values below were computed independently with 40-digit arithmetic.

TEST(ClosedForm, Coefficient) {
    EXPECT_LT(rel(lorentzian_coefficient, 18.5055082520425474), 1e-15);
    EXPECT_EQ(lorentzian_coefficient, 2.0 * quoted_lorentzian_coefficient);
}

TEST(ClosedForm, PhotonNumber) {
    EXPECT_LT(rel(lorentzian_photon_number(1e-4, 1e-2), 1.85055082520425e-11), 1e-13);
    EXPECT_LT(rel(lorentzian_photon_number(1e-4, 1e-2, quoted_lorentzian_coefficient), 9.25275412602127e-12), 1e-13);
    EXPECT_EQ(lorentzian_photon_number(1e-4, 0.0), 0.0);
    EXPECT_THROW(lorentzian_photon_number(0.0, 1.0), invalid_argument);
    EXPECT_THROW(lorentzian_photon_number(1e-4, -1.0), invalid_argument);
}

TEST(ClosedForm, QuarticInBeta) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lb(-8.0, -1.0);
    for (int i = 0; i < 100; ++i) {
        const double b = std::pow(10.0, lb(rng));
        EXPECT_LT(rel(lorentzian_photon_number(1e-4, 2.0 * b), 16.0 * lorentzian_photon_number(1e-4, b)), 1e-14);
    }
}

TEST(ClosedForm, FormFactor) {
    const double b = 5.77749960463941e-6;
    EXPECT_LT(rel(lorentzian_form_factor_closed(b, 1e-9, 0.0), std::numbers::pi * b * b * 1e-27), 1e-15);
    EXPECT_LT(rel(lorentzian_form_factor_closed(b, 1e-9, 1e9), std::numbers::pi * b * b * 1e-27 / std::numbers::e), 1e-15);
    EXPECT_EQ(lorentzian_form_factor_closed(0.0, 1e-9, 1e9), 0.0);
    EXPECT_THROW(lorentzian_form_factor_closed(b, 0.0, 1.0), invalid_argument);
}

TEST(ClosedForm, Energy) {
    const double e1 = lorentzian_radiated_energy(1e-4, 1e-3, 1e-9);
    EXPECT_LT(rel(e1, PhysicalConstants::hbar * 3e9 * lorentzian_photon_number(1e-4, 1e-3)), 1e-15);
    EXPECT_LT(rel(lorentzian_radiated_energy(1e-4, 1e-3, 2e-9), 0.5 * e1), 1e-15);
    EXPECT_EQ(lorentzian_radiated_energy(1e-4, 0.0, 1e-9), 0.0);
}

TEST(VelocityBound, Values) {
    EXPECT_LT(rel(velocity_bound(1500.0), 6.26732512038286e-23), 1e-13);
    EXPECT_LT(rel(1500.0 / PhysicalConstants::c, 5.00346142797228e-6), 1e-13);
    EXPECT_EQ(velocity_bound(PhysicalConstants::c), 0.1);
    EXPECT_EQ(velocity_bound(0.0), 0.0);
    EXPECT_THROW(velocity_bound(-1.0), invalid_argument);
}

TEST(VelocityBound, QuarticAndMonotone) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(1.0, 1e8);
    for (int i = 0; i < 200; ++i) {
        const double v = u(rng);
        EXPECT_LT(rel(velocity_bound(2.0 * v), 16.0 * velocity_bound(v)), 1e-14);
        EXPECT_LT(velocity_bound(v), velocity_bound(v * (1.0 + 1e-9)));
    }
}

TEST(Gap, Values) {
    EXPECT_LT(rel(observed_gap(6.26732512038286e-23, 1e5), 1.5955770297e27), 1e-10);
    EXPECT_EQ(observed_gap(3.0, 3.0), 1.0);
    EXPECT_LT(rel(observed_gap(1e-23, 1e5), 1e28), 1e-15);
    EXPECT_TRUE(std::isinf(observed_gap(0.0, 1e5)));
    EXPECT_THROW(observed_gap(1.0, 0.0), invalid_argument);
}

TEST(Spectrum, PeakAndMean) {
    const auto m = peak_and_mean_omega(1e-9);
    EXPECT_DOUBLE_EQ(m.peak, 2.5e9);
    EXPECT_DOUBLE_EQ(m.mean, 3e9);
    const auto h = peak_and_mean_omega(2e-9);
    EXPECT_DOUBLE_EQ(h.peak, 0.5 * m.peak);
    EXPECT_DOUBLE_EQ(h.mean, 0.5 * m.mean);
    for (const double g : {1e-15, 1e-9, 3.3e-2}) {
        const auto s = peak_and_mean_omega(g);
        EXPECT_NEAR(s.mean / s.peak, 1.2, 1e-15);
    }
}

TEST(BoundCheck, ModerateDipSatisfied) {
    const auto r = bound_check(LorentzianPulse(2e-6, 1e-6, 1e-9, 100e-9));
    EXPECT_TRUE(r.satisfied);
    EXPECT_NEAR(r.ratio, 0.0495035, 1e-6);
    EXPECT_LT(r.photon_number, r.bound_value);
}

TEST(BoundCheck, StaticTraceIsZeroOverZero) {
    std::vector<Sample> s;
    for (int i = 0; i < 16; ++i) s.push_back({i * 1e-9, 1e-6});
    const auto r = bound_check(TabulatedTrajectory(s));
    EXPECT_EQ(r.ratio, 0.0);
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.photon_number, 0.0);
}

// For shallow dips (rmin / r0 close to 1) the model radiates more than the
// 0.1 (v/c)^4 bound allows; the ratio grows without limit as rmin -> r0.
TEST(BoundCheck, ShallowDipExceedsBound) {
    const auto r = bound_check(LorentzianPulse(1e-6, 0.95e-6, 1e-9, 100e-9));
    EXPECT_FALSE(r.satisfied);
    EXPECT_GT(r.ratio, 10.0);
}

TEST(BoundCheck, SubluminalPointsStayBelowOne) {
    for (const double x : {0.05, 0.5, 0.95})
        for (const double g : {1e-14, 1e-12, 1e-9}) {
            const LorentzianPulse p(1e-6, x * 1e-6, g, 100.0 * g);
            const auto r = bound_check(p);
            if (r.v_max < PhysicalConstants::c) {
                EXPECT_LT(r.photon_number, 1.0) << x << " " << g;
            }
        }
}

TEST(Regime, WindowTruncation) {
    EXPECT_LT(rel(window_truncation_fraction(LorentzianPulse(2e-6, 1e-6, 1e-9, 40e-9)), 0.03180450251235275), 1e-12);
    EXPECT_THROW(require_closed_form_regime(LorentzianPulse(2e-6, 1e-6, 1e-9, 39e-9)), invalid_argument);
    EXPECT_NO_THROW(require_closed_form_regime(LorentzianPulse(2e-6, 1e-6, 1e-9, 40e-9)));
}

TEST(Regime, ComparisonReport) {
    const auto c = compare_with_closed_form(LorentzianPulse(2e-6, 1e-6, 1e-9, 100e-9));
    EXPECT_LT(c.relative_difference, 1e-6);
    EXPECT_GT(c.window_truncation, 0.0);
}

TEST(PeakSpeed, TargetedPulse) {
    const auto p = lorentzian_with_peak_speed(1500.0, 0.5, 1e-9);
    EXPECT_LT(rel(max_surface_velocity(p), 1500.0), 1e-12);
    EXPECT_DOUBLE_EQ(p.rmin() / p.r0(), 0.5);
    const double n = photon_number(p).value;
    EXPECT_GE(n, 1e-25);
    EXPECT_LE(n, 1e-22);
    EXPECT_GE(observed_gap(n, 1e5), 1e27);
}
