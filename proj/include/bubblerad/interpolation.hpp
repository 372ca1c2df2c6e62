#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace bubblerad {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson).
///
/// Initial knot slopes are three-point finite differences (second order on
/// smooth data); slopes are zeroed at local extrema and limited to
/// alpha^2 + beta^2 <= 9 so each segment stays monotone. The interpolant is
/// C1 and reproduces the knot values exactly.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::span<const double> x, std::span<const double> y) : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
        if (x_.size() != y_.size())
            throw invalid_argument("interpolant: abscissa and ordinate sizes differ");
        if (x_.size() < 2)
            throw invalid_argument("interpolant: at least two knots required");
        for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
            if (!(x_[k + 1] > x_[k]))
                throw invalid_argument("interpolant: abscissae must be strictly increasing");
        }
        compute_slopes();
    }

    std::size_t size() const { return x_.size(); }
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& slopes() const { return m_; }

    double operator()(double x) const {
        std::size_t k = 0;
        if (locate(x, k))
            return y_[k];
        const double h = x_[k + 1] - x_[k];
        const double s = (x - x_[k]) / h;
        const double d = (y_[k + 1] - y_[k]) / h;
        const double c2 = 3.0 * d - 2.0 * m_[k] - m_[k + 1];
        const double c3 = m_[k] + m_[k + 1] - 2.0 * d;
        return y_[k] + h * s * (m_[k] + s * (c2 + s * c3));
    }

    double derivative(double x) const {
        std::size_t k = 0;
        if (locate(x, k))
            return m_[k];
        const double h = x_[k + 1] - x_[k];
        const double s = (x - x_[k]) / h;
        const double d = (y_[k + 1] - y_[k]) / h;
        const double c2 = 3.0 * d - 2.0 * m_[k] - m_[k + 1];
        const double c3 = m_[k] + m_[k + 1] - 2.0 * d;
        return m_[k] + s * (2.0 * c2 + 3.0 * s * c3);
    }

private:
    // Returns true when x coincides with knot k. Otherwise k is the
    // segment containing x (clamped to the end segments).
    bool locate(double x, std::size_t& k) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        if (it == x_.begin()) {
            k = 0;
            return x == x_.front();
        }
        k = static_cast<std::size_t>(it - x_.begin()) - 1;
        if (x_[k] == x)
            return true;
        if (k + 1 >= x_.size())
            k = x_.size() - 2;
        return false;
    }

    static double endpoint_slope(double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (std::signbit(m) != std::signbit(d0) || d0 == 0.0)
            m = 0.0;
        else if (std::signbit(d0) != std::signbit(d1) && std::abs(m) > 3.0 * std::abs(d0))
            m = 3.0 * d0;
        return m;
    }

    void compute_slopes() {
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = x_[k + 1] - x_[k];
            d[k] = (y_[k + 1] - y_[k]) / h[k];
        }
        m_.assign(n, 0.0);
        if (n == 2) {
            m_[0] = m_[1] = d[0];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (d[k - 1] * d[k] <= 0.0)
                m_[k] = 0.0;
            else
                m_[k] = (h[k] * d[k - 1] + h[k - 1] * d[k]) / (h[k - 1] + h[k]);
        }
        m_[0] = endpoint_slope(h[0], h[1], d[0], d[1]);
        m_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);

        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (d[k] == 0.0) {
                m_[k] = 0.0;
                m_[k + 1] = 0.0;
                continue;
            }
            const double a = m_[k] / d[k];
            const double b = m_[k + 1] / d[k];
            const double r = a * a + b * b;
            if (r > 9.0) {
                const double tau = 3.0 / std::sqrt(r);
                m_[k] = tau * a * d[k];
                m_[k + 1] = tau * b * d[k];
            }
        }
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

/// Local least-squares quadratic smoothing on (possibly non-uniform)
/// abscissae. Each value is replaced by the value at x_i of the quadratic
/// fitted to the `window` nearest samples (window shifted inward at the
/// ends). `window` must be odd and within [5, 11].
inline std::vector<double> smooth_local_quadratic(std::span<const double> x, std::span<const double> y, std::size_t window) {
    if (window < 5 || window > 11 || window % 2 == 0)
        throw invalid_argument("smoothing window must be odd and between 5 and 11");
    const std::size_t n = x.size();
    if (y.size() != n)
        throw invalid_argument("smoothing: size mismatch");
    if (n < window)
        throw invalid_argument("smoothing window exceeds the number of samples");

    std::vector<double> out(n);
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = std::min(i >= half ? i - half : 0, n - window);
        const double scale = x[lo + window - 1] - x[lo];
        // Normal equations for c0 + c1 s + c2 s^2, s = (x - x_i) / scale.
        std::array<double, 5> pw{};  // sums of s^0..s^4
        std::array<double, 3> rhs{};
        for (std::size_t j = lo; j < lo + window; ++j) {
            const double s = (x[j] - x[i]) / scale;
            double p = 1.0;
            for (std::size_t q = 0; q < 5; ++q) {
                pw[q] += p;
                if (q < 3)
                    rhs[q] += p * y[j];
                p *= s;
            }
        }
        std::array<std::array<double, 4>, 3> a{{{pw[0], pw[1], pw[2], rhs[0]},
                                                 {pw[1], pw[2], pw[3], rhs[1]},
                                                 {pw[2], pw[3], pw[4], rhs[2]}}};
        for (std::size_t col = 0; col < 3; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < 3; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                    piv = r;
            std::swap(a[col], a[piv]);
            for (std::size_t r = col + 1; r < 3; ++r) {
                const double f = a[r][col] / a[col][col];
                for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            }
        }
        std::array<double, 3> coef{};
        for (std::size_t r = 3; r-- > 0;) {
            double v = a[r][3];
            for (std::size_t c = r + 1; c < 3; ++c) v -= a[r][c] * coef[c];
            coef[r] = v / a[r][r];
        }
        out[i] = coef[0];
    }
    return out;
}

}  // namespace bubblerad
