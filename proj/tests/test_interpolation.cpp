#include <bubblerad/interpolation.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace bubblerad;

TEST(MonotoneCubic, ReproducesKnots) {
    const std::vector<double> x{0.0, 0.5, 1.7, 2.0, 3.1, 4.0};
    const std::vector<double> y{1.0, 3.0, -2.0, -2.0, 5.0, 4.5};
    const MonotoneCubic f(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(f(x[i]), y[i]);
}

TEST(MonotoneCubic, LinearDataIsExact) {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(0.3 * i * i);
        y.push_back(2.0 - 1.5 * x.back());
    }
    const MonotoneCubic f(x, y);
    for (double t = 0.0; t <= x.back(); t += 0.137) {
        EXPECT_NEAR(f(t), 2.0 - 1.5 * t, 1e-12);
        EXPECT_NEAR(f.derivative(t), -1.5, 1e-12);
    }
}

TEST(MonotoneCubic, PreservesMonotonicity) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x{0.0}, y{0.0};
        for (int i = 1; i < 25; ++i) {
            x.push_back(x.back() + step(rng));
            y.push_back(y.back() + (i % 7 == 0 ? 0.0 : step(rng) * step(rng) * 10.0));
        }
        const MonotoneCubic f(x, y);
        double prev = f(x.front());
        for (int k = 1; k <= 2000; ++k) {
            const double t = x.front() + (x.back() - x.front()) * k / 2000.0;
            const double v = f(t);
            ASSERT_GE(v, prev - 1e-12) << "trial " << trial << " t " << t;
            prev = v;
        }
    }
}

TEST(MonotoneCubic, SmoothDataIsAccurate) {
    std::vector<double> x, y;
    for (int i = 0; i <= 200; ++i) {
        x.push_back(-10.0 + 0.1 * i);
        y.push_back(1.0 / (1.0 + x.back() * x.back()));
    }
    const MonotoneCubic f(x, y);
    double worst = 0.0;
    for (double t = -9.99; t < 10.0; t += 0.0173) worst = std::max(worst, std::abs(f(t) - 1.0 / (1.0 + t * t)));
    EXPECT_LT(worst, 1e-3);
}

TEST(MonotoneCubic, RejectsBadInput) {
    const std::vector<double> a{0.0, 1.0, 1.0};
    const std::vector<double> b{0.0, 1.0, 2.0};
    EXPECT_THROW(MonotoneCubic(a, b), invalid_argument);
    EXPECT_THROW(MonotoneCubic(std::vector<double>{0.0}, std::vector<double>{1.0}), invalid_argument);
    EXPECT_THROW(MonotoneCubic(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0}), invalid_argument);
}

TEST(Smoothing, QuadraticsAreFixedPoints) {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(0.2 * i + 0.01 * (i % 3));
        y.push_back(1.0 - 2.0 * x.back() + 0.5 * x.back() * x.back());
    }
    for (const std::size_t w : {5u, 7u, 11u}) {
        const auto s = smooth_local_quadratic(x, y, w);
        for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(s[i], y[i], 1e-10);
    }
}

TEST(Smoothing, ReducesNoise) {
    std::mt19937 rng(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<double> x, y, truth;
    for (int i = 0; i < 200; ++i) {
        x.push_back(0.05 * i);
        truth.push_back(std::sin(x.back()));
        y.push_back(truth.back() + noise(rng));
    }
    const auto s = smooth_local_quadratic(x, y, 9);
    double e_raw = 0.0, e_s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        e_raw += (y[i] - truth[i]) * (y[i] - truth[i]);
        e_s += (s[i] - truth[i]) * (s[i] - truth[i]);
    }
    EXPECT_LT(e_s, 0.5 * e_raw);
}

TEST(Smoothing, WindowValidation) {
    const std::vector<double> x{0, 1, 2, 3, 4, 5, 6};
    EXPECT_THROW(smooth_local_quadratic(x, x, 4), invalid_argument);
    EXPECT_THROW(smooth_local_quadratic(x, x, 13), invalid_argument);
    EXPECT_THROW(smooth_local_quadratic(x, x, 9), invalid_argument);
    EXPECT_NO_THROW(smooth_local_quadratic(x, x, 7));
}
