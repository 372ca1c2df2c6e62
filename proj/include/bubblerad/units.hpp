#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace bubblerad {

/// Physical constants in SI. `c` and `hbar` are fixed; `alpha` is the
/// dimensionless coupling of the dielectric interface and is a model
/// parameter (1e-4 for water/air).
struct PhysicalConstants {
    static constexpr double c = 299792458.0;        // m/s, exact
    static constexpr double hbar = 1.054571817e-34;  // J s
    static constexpr double default_alpha = 1e-4;

    double alpha = default_alpha;

    void validate() const {
        if (!(std::isfinite(alpha) && alpha > 0.0))
            throw invalid_argument("alpha must be finite and positive");
    }
};

enum class Unit { micrometre, metre, nanosecond, second, km_per_s, m_per_s };

enum class Dimension { length, time, velocity };

inline Dimension dimension_of(Unit u) {
    switch (u) {
    case Unit::micrometre:
    case Unit::metre: return Dimension::length;
    case Unit::nanosecond:
    case Unit::second: return Dimension::time;
    case Unit::km_per_s:
    case Unit::m_per_s: return Dimension::velocity;
    }
    return Dimension::length;
}

/// SI value of one unit.
inline double si_factor(Unit u) {
    switch (u) {
    case Unit::micrometre: return 1e-6;
    case Unit::metre: return 1.0;
    case Unit::nanosecond: return 1e-9;
    case Unit::second: return 1.0;
    case Unit::km_per_s: return 1e3;
    case Unit::m_per_s: return 1.0;
    }
    return 1.0;
}

/// Decimal exponent of si_factor: si_factor(u) == 10^si_exponent(u).
inline int si_exponent(Unit u) {
    switch (u) {
    case Unit::micrometre: return -6;
    case Unit::nanosecond: return -9;
    case Unit::km_per_s: return 3;
    case Unit::metre:
    case Unit::second:
    case Unit::m_per_s: return 0;
    }
    return 0;
}

/// x * 10^k with a single rounding (divides for negative k).
inline double scale_pow10(double x, int k) {
    double p = 1.0;
    for (int i = 0; i < (k < 0 ? -k : k); ++i) p *= 10.0;  // exact up to 10^22
    return k < 0 ? x / p : x * p;
}

/// Accepts "um", "µm", "m", "ns", "s", "km/s", "m/s".
inline Unit parse_unit(std::string_view tag) {
    if (tag == "um" || tag == "\xC2\xB5m" || tag == "\xCE\xBCm")
        return Unit::micrometre;
    if (tag == "m")
        return Unit::metre;
    if (tag == "ns")
        return Unit::nanosecond;
    if (tag == "s")
        return Unit::second;
    if (tag == "km/s")
        return Unit::km_per_s;
    if (tag == "m/s")
        return Unit::m_per_s;
    throw invalid_argument("unknown unit tag '" + std::string(tag) + "'");
}

struct Quantity {
    double value;
    Unit unit;
};

/// Reference scales for nondimensionalization. Velocities are always
/// measured in units of c.
struct Scales {
    double length_m = 1e-6;
    double time_s = 1e-9;

    void validate() const {
        if (!(std::isfinite(length_m) && length_m > 0.0 && std::isfinite(time_s) && time_s > 0.0))
            throw invalid_argument("reference scales must be finite and positive");
    }

    double reference_for(Dimension d) const {
        switch (d) {
        case Dimension::length: return length_m;
        case Dimension::time: return time_s;
        case Dimension::velocity: return PhysicalConstants::c;
        }
        return 1.0;
    }
};

inline double to_internal(Quantity q, const Scales& scales = {}) {
    if (!std::isfinite(q.value))
        throw invalid_argument("quantity must be finite");
    scales.validate();
    return q.value * si_factor(q.unit) / scales.reference_for(dimension_of(q.unit));
}

inline double from_internal(double x, Unit unit, const Scales& scales = {}) {
    if (!std::isfinite(x))
        throw invalid_argument("internal value must be finite");
    scales.validate();
    return x * scales.reference_for(dimension_of(unit)) / si_factor(unit);
}

inline double to_si(Quantity q) { return scale_pow10(q.value, si_exponent(q.unit)); }

/// Time for the surface to move `radius` at `speed`, in nanoseconds. The
/// unit prefixes are combined as integer powers of ten so decimal inputs
/// such as 1 um at 1 km/s give exactly 1 ns.
inline Quantity characteristic_time(Quantity radius, Quantity speed) {
    if (dimension_of(radius.unit) != Dimension::length || dimension_of(speed.unit) != Dimension::velocity)
        throw invalid_argument("characteristic_time needs a length and a velocity");
    if (!(radius.value > 0.0 && speed.value > 0.0 && std::isfinite(radius.value) && std::isfinite(speed.value)))
        throw invalid_argument("characteristic_time requires positive finite scales");
    const int k = si_exponent(radius.unit) - si_exponent(speed.unit) - si_exponent(Unit::nanosecond);
    return {scale_pow10(radius.value / speed.value, k), Unit::nanosecond};
}

}  // namespace bubblerad
