#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

namespace twoscale {

/// Extended real number in [-inf, +inf].
///
/// Stored as an IEEE double, but `+` is Moreau lower addition:
/// (+inf) + (-inf) = (-inf) + (+inf) = -inf. Raw IEEE addition would give NaN.
class ExtReal {
public:
    constexpr ExtReal() = default;
    constexpr ExtReal(double v) : v_(v) {}  // NOLINT: implicit by intent

    static constexpr ExtReal plus_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static constexpr ExtReal minus_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    constexpr double value() const { return v_; }
    bool is_finite() const { return std::isfinite(v_); }
    bool is_plus_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
    bool is_minus_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

    constexpr ExtReal operator-() const { return ExtReal(-v_); }

    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

    friend std::ostream& operator<<(std::ostream& os, ExtReal x) { return os << x.v_; }

private:
    double v_ = 0.0;
};

/// Moreau lower addition on raw doubles.
constexpr double low_add(double a, double b) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a == -inf || b == -inf) return -inf;
    return a + b;
}

constexpr ExtReal low_add(ExtReal a, ExtReal b) { return ExtReal(low_add(a.value(), b.value())); }

constexpr ExtReal operator+(ExtReal a, ExtReal b) { return low_add(a, b); }
constexpr ExtReal operator-(ExtReal a, ExtReal b) { return low_add(a, -b); }

/// Nonnegative weight times extended real; 0 * (+-inf) = 0.
constexpr double weighted(double w, double x) { return w == 0.0 ? 0.0 : w * x; }

}  // namespace twoscale
