#pragma once

// Numerical building blocks shared by the spectral engine: compensated
// summation, adaptive Gauss-Kronrod integration with a panel-width cap,
// Wynn's epsilon extrapolation and golden-section search.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bubblerad {

/// Neumaier's variant of Kahan summation; robust when an addend is larger
/// than the running sum.
class CompensatedSum {
public:
    CompensatedSum& operator+=(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Fixed-size vector of doubles with the arithmetic the integrator needs.
template <std::size_t N>
struct Vec {
    std::array<double, N> c{};

    double& operator[](std::size_t i) { return c[i]; }
    double operator[](std::size_t i) const { return c[i]; }

    friend Vec operator+(Vec a, const Vec& b) {
        for (std::size_t i = 0; i < N; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend Vec operator-(Vec a, const Vec& b) {
        for (std::size_t i = 0; i < N; ++i) a.c[i] -= b.c[i];
        return a;
    }
    friend Vec operator*(double s, Vec a) {
        for (auto& x : a.c) x *= s;
        return a;
    }
};

namespace detail {

// Component view of the value types the integrator supports. Errors are
// controlled per component.
template <class V>
struct value_traits;

template <>
struct value_traits<double> {
    using error_type = double;
    static constexpr std::size_t size = 1;
    static double magnitude_err(double v, std::size_t) { return std::abs(v); }
    static double magnitude(double v, std::size_t) { return std::abs(v); }
    static double abs_value(double v) { return std::abs(v); }
};

template <>
struct value_traits<std::complex<double>> {
    using error_type = double;
    static constexpr std::size_t size = 1;
    static double magnitude_err(double v, std::size_t) { return std::abs(v); }
    static double magnitude(const std::complex<double>& v, std::size_t) { return std::abs(v); }
    static double abs_value(const std::complex<double>& v) { return std::abs(v); }
};

template <std::size_t N>
struct value_traits<Vec<N>> {
    using error_type = Vec<N>;
    static constexpr std::size_t size = N;
    static double magnitude_err(const Vec<N>& v, std::size_t i) { return std::abs(v[i]); }
    static double magnitude(const Vec<N>& v, std::size_t i) { return std::abs(v[i]); }
    static Vec<N> abs_value(const Vec<N>& v) {
        Vec<N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = std::abs(v[i]);
        return r;
    }
};

template <class V>
class CompensatedAccumulator;

template <>
class CompensatedAccumulator<double> {
public:
    void add(double v) { s_ += v; }
    double value() const { return s_.value(); }

private:
    CompensatedSum s_;
};

template <>
class CompensatedAccumulator<std::complex<double>> {
public:
    void add(const std::complex<double>& v) {
        re_ += v.real();
        im_ += v.imag();
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

template <std::size_t N>
class CompensatedAccumulator<Vec<N>> {
public:
    void add(const Vec<N>& v) {
        for (std::size_t i = 0; i < N; ++i) s_[i] += v[i];
    }
    Vec<N> value() const {
        Vec<N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = s_[i].value();
        return r;
    }

private:
    std::array<CompensatedSum, N> s_{};
};

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One Gauss-Kronrod panel: Kronrod estimate, |Kronrod - Gauss| and the
/// integral of |f| (used for the roundoff floor).
template <class V>
struct Panel {
    using E = typename detail::value_traits<V>::error_type;
    double a = 0.0;
    double b = 0.0;
    V value{};
    E error{};
    E abs_integral{};
};

template <class V, class F>
Panel<V> gauss_kronrod15(F&& f, double a, double b) {
    using T = detail::value_traits<V>;
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const V fc = f(center);
    V kronrod = detail::gk15_kronrod_weights[7] * fc;
    V gauss = detail::gk15_gauss_weights[3] * fc;
    using E = typename T::error_type;
    E absint = detail::gk15_kronrod_weights[7] * T::abs_value(fc);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * detail::gk15_nodes[j];
        const V f1 = f(center - dx);
        const V f2 = f(center + dx);
        const V sum = f1 + f2;
        kronrod = kronrod + detail::gk15_kronrod_weights[j] * sum;
        absint = absint + detail::gk15_kronrod_weights[j] * (T::abs_value(f1) + T::abs_value(f2));
        if (j % 2 == 1)
            gauss = gauss + detail::gk15_gauss_weights[j / 2] * sum;
    }
    Panel<V> p;
    p.a = a;
    p.b = b;
    p.value = half * kronrod;
    if constexpr (std::is_same_v<V, double> || std::is_same_v<V, std::complex<double>>) {
        p.error = half * std::abs(kronrod - gauss);
    } else {
        p.error = T::abs_value(half * (kronrod - gauss));
    }
    p.abs_integral = std::abs(half) * absint;
    return p;
}

struct AdaptiveOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    std::size_t max_panels = 1000000;
    /// Upper bound on the width of any panel (infinity: no cap).
    double max_panel_width = std::numeric_limits<double>::infinity();
    /// Only the first `controlled_components` components of a vector-valued
    /// integrand drive refinement; the rest are integrated on the same panels.
    std::size_t controlled_components = std::numeric_limits<std::size_t>::max();
};

template <class V>
struct IntegrationResult {
    using E = typename detail::value_traits<V>::error_type;
    V value{};
    E error{};
    E abs_integral{};
    std::size_t panels = 0;
    /// The requested tolerance was below the roundoff floor and the
    /// floor was accepted instead.
    bool roundoff_limited = false;
};

/// Roundoff floor relative to the integral of |f|.
inline constexpr double roundoff_factor = 50.0 * std::numeric_limits<double>::epsilon();

/// Globally adaptive Gauss-Kronrod integration over the interval spanned by
/// `breaks` (strictly increasing). Each [breaks[i], breaks[i+1]] is first
/// cut into equal panels no wider than `max_panel_width`; the panel with the
/// largest error is then bisected until every controlled component
/// satisfies err <= max(abs_tol, rel_tol |I|, roundoff floor). Putting
/// breakpoints at known non-smooth points keeps refinement local.
template <class V, class F>
IntegrationResult<V> integrate_adaptive(F&& f, std::span<const double> breaks, const AdaptiveOptions& opt) {
    using T = detail::value_traits<V>;
    using E = typename T::error_type;
    const std::size_t m = std::min(T::size, std::max<std::size_t>(1, opt.controlled_components));
    IntegrationResult<V> out;
    if (breaks.size() < 2 || breaks.front() == breaks.back())
        return out;

    std::vector<Panel<V>> panels;
    for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
        const double a = breaks[seg];
        const double b = breaks[seg + 1];
        if (!(b > a))
            throw invalid_argument("integration breakpoints must be strictly increasing");
        const double width = b - a;
        std::size_t initial = 1;
        if (std::isfinite(opt.max_panel_width) && opt.max_panel_width > 0.0) {
            const double n = std::ceil(width / opt.max_panel_width);
            if (n + static_cast<double>(panels.size()) > static_cast<double>(opt.max_panels))
                throw numerical_error("panel-width cap requires more than max_panels panels",
                                      std::numeric_limits<double>::infinity());
            initial = std::max<std::size_t>(1, static_cast<std::size_t>(n));
        }
        for (std::size_t i = 0; i < initial; ++i) {
            const double lo = a + width * static_cast<double>(i) / static_cast<double>(initial);
            const double hi = (i + 1 == initial) ? b : a + width * static_cast<double>(i + 1) / static_cast<double>(initial);
            panels.push_back(gauss_kronrod15<V>(f, lo, hi));
        }
    }

    auto sum_panels = [&](auto member) {
        using M = std::decay_t<decltype(panels.front().*member)>;
        detail::CompensatedAccumulator<M> acc;
        for (const auto& p : panels) acc.add(p.*member);
        return acc.value();
    };

    V value = sum_panels(&Panel<V>::value);
    E error = sum_panels(&Panel<V>::error);
    E absint = sum_panels(&Panel<V>::abs_integral);

    // Fixed per-component scales used to rank panels for bisection.
    std::array<double, T::size> scale{};
    for (std::size_t i = 0; i < m; ++i) {
        scale[i] = std::max({T::magnitude(value, i), roundoff_factor * T::magnitude_err(absint, i),
                             std::numeric_limits<double>::min()});
    }
    auto priority = [&](const Panel<V>& p) {
        double w = 0.0;
        for (std::size_t i = 0; i < m; ++i) w = std::max(w, T::magnitude_err(p.error, i) / scale[i]);
        return w;
    };
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;
    for (std::size_t i = 0; i < panels.size(); ++i) heap.push({priority(panels[i]), i});

    auto converged = [&](bool& roundoff) {
        roundoff = false;
        for (std::size_t i = 0; i < m; ++i) {
            const double requested = std::max(opt.abs_tol, opt.rel_tol * T::magnitude(value, i));
            const double floor = roundoff_factor * T::magnitude_err(absint, i);
            const double err = T::magnitude_err(error, i);
            if (err > std::max(requested, floor))
                return false;
            if (err > requested)
                roundoff = true;
        }
        return true;
    };

    std::size_t since_resum = 0;
    bool roundoff = false;
    while (!converged(roundoff)) {
        if (panels.size() >= opt.max_panels) {
            double worst = 0.0;
            for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, T::magnitude_err(error, i));
            throw numerical_error("adaptive quadrature did not converge within max_panels", worst);
        }
        const auto [w, idx] = heap.top();
        heap.pop();
        const Panel<V> parent = panels[idx];
        const double mid = 0.5 * (parent.a + parent.b);
        if (!(mid > parent.a && mid < parent.b)) {
            // Cannot bisect further at double precision.
            double worst = 0.0;
            for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, T::magnitude_err(error, i));
            throw numerical_error("adaptive quadrature reached the resolution limit of double precision", worst);
        }
        Panel<V> left = gauss_kronrod15<V>(f, parent.a, mid);
        Panel<V> right = gauss_kronrod15<V>(f, mid, parent.b);
        value = value + ((left.value + right.value) - parent.value);
        error = error + ((left.error + right.error) - parent.error);
        absint = absint + ((left.abs_integral + right.abs_integral) - parent.abs_integral);
        panels[idx] = left;
        panels.push_back(right);
        heap.push({priority(panels[idx]), idx});
        heap.push({priority(panels.back()), panels.size() - 1});
        if (++since_resum == 256) {
            since_resum = 0;
            value = sum_panels(&Panel<V>::value);
            error = sum_panels(&Panel<V>::error);
            absint = sum_panels(&Panel<V>::abs_integral);
        }
    }

    out.value = sum_panels(&Panel<V>::value);
    out.error = sum_panels(&Panel<V>::error);
    out.abs_integral = sum_panels(&Panel<V>::abs_integral);
    out.panels = panels.size();
    out.roundoff_limited = roundoff;
    return out;
}

/// integrate_adaptive over the single interval [a, b] (a > b flips the sign).
template <class V, class F>
IntegrationResult<V> integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt) {
    if (a == b)
        return {};
    if (a > b) {
        auto r = integrate_adaptive<V>(f, b, a, opt);
        r.value = -1.0 * r.value;
        return r;
    }
    const std::array<double, 2> breaks{a, b};
    return integrate_adaptive<V>(f, std::span<const double>(breaks), opt);
}

/// Wynn's epsilon algorithm over a stream of partial sums. Keeps only the
/// latest ascending diagonal of the table, truncated to `max_columns`.
class WynnEpsilon {
public:
    using value_type = std::complex<double>;

    explicit WynnEpsilon(std::size_t max_columns = 40) : max_columns_(max_columns) {}

    /// Feeds the next partial sum; returns the current extrapolated limit.
    value_type add(value_type partial_sum) {
        std::vector<value_type> next;
        next.reserve(std::min(diag_.size() + 1, max_columns_ + 1));
        next.push_back(partial_sum);
        for (std::size_t j = 1; j <= diag_.size() && j <= max_columns_; ++j) {
            const value_type diff = next[j - 1] - diag_[j - 1];
            if (std::abs(diff) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next[j - 1]))
                break;  // converged column; higher columns would divide by ~0
            const value_type prev = (j >= 2) ? diag_[j - 2] : value_type{};
            next.push_back(prev + 1.0 / diff);
        }
        diag_ = std::move(next);
        // Highest even column holds the best estimate.
        const std::size_t best = (diag_.size() - 1) & ~std::size_t{1};
        history_.push_back(diag_[best]);
        return history_.back();
    }

    /// Heuristic error: spread of the last three extrapolated values.
    double error_estimate() const {
        const std::size_t n = history_.size();
        if (n < 3)
            return std::numeric_limits<double>::infinity();
        return std::abs(history_[n - 1] - history_[n - 2]) + std::abs(history_[n - 1] - history_[n - 3]);
    }

    std::size_t terms() const { return history_.size(); }

private:
    std::size_t max_columns_;
    std::vector<value_type> diag_;
    std::vector<value_type> history_;
};

struct GoldenResult {
    double x;
    double value;
};

/// Golden-section search for a maximum of a unimodal `f` on [lo, hi].
/// Stops when the bracket is narrower than rel_tol * max(|lo|, |hi|)
/// (or an absolute floor for brackets around 0).
template <class F>
GoldenResult golden_section_maximize(F&& f, double lo, double hi, double rel_tol = 1e-12) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = std::min(lo, hi);
    double b = std::max(lo, hi);
    const double floor = std::abs(b - a) * std::numeric_limits<double>::epsilon();
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int iter = 0; iter < 400; ++iter) {
        const double tol = std::max(rel_tol * std::max(std::abs(a), std::abs(b)), floor);
        if (b - a <= tol)
            break;
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

}  // namespace bubblerad
