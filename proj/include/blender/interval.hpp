#ifndef BLENDER_INTERVAL_HPP
#define BLENDER_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "blender/errors.hpp"

namespace blender {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double step_down(double x) noexcept { return std::nextafter(x, -kInf); }
inline double step_up(double x) noexcept { return std::nextafter(x, kInf); }

// Error-free transformations. They are only used to decide whether a
// round-to-nearest result is exact, in which case no outward step is taken.
inline bool sum_is_exact(double a, double b, double s) noexcept
{
    if (!std::isfinite(s)) {
        return false;
    }
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err == 0.0;
}

// Splits for Dekker's product; valid while |x| < 2^995.
inline void veltkamp_split(double x, double& hi, double& lo) noexcept
{
    constexpr double kSplitter = 134217729.0; // 2^27 + 1
    const double t = kSplitter * x;
    hi = t - (t - x);
    lo = x - hi;
}

inline bool product_is_exact(double a, double b, double p) noexcept
{
    if (a == 0.0 || b == 0.0) {
        return true;
    }
    if (!std::isfinite(p) || p == 0.0) {
        return false;
    }
    // Below this the rounding error of p may itself be subnormal and inexact.
    constexpr double kTiny = 0x1p-968;
    constexpr double kHuge = 0x1p+995;
    const double ap = std::fabs(p);
    if (ap < kTiny || std::fabs(a) > kHuge || std::fabs(b) > kHuge) {
        return false;
    }
#ifdef FP_FAST_FMA
    return std::fma(a, b, -p) == 0.0;
#else
    double ah, al, bh, bl;
    veltkamp_split(a, ah, al);
    veltkamp_split(b, bh, bl);
    const double err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    return err == 0.0;
#endif
}

inline double add_down(double a, double b) noexcept
{
    const double s = a + b;
    return sum_is_exact(a, b, s) ? s : step_down(s);
}
inline double add_up(double a, double b) noexcept
{
    const double s = a + b;
    return sum_is_exact(a, b, s) ? s : step_up(s);
}
inline double sub_down(double a, double b) noexcept { return add_down(a, -b); }
inline double sub_up(double a, double b) noexcept { return add_up(a, -b); }

inline double mul_down(double a, double b) noexcept
{
    const double p = a * b;
    return product_is_exact(a, b, p) ? p : step_down(p);
}
inline double mul_up(double a, double b) noexcept
{
    const double p = a * b;
    return product_is_exact(a, b, p) ? p : step_up(p);
}

// q = a / b is exact iff q * b reproduces a with no rounding error.
inline bool quotient_is_exact(double a, double b, double q) noexcept
{
    if (a == 0.0) {
        return true;
    }
    if (!std::isfinite(q) || q == 0.0) {
        return false;
    }
    return q * b == a && product_is_exact(q, b, q * b);
}
inline double div_down(double a, double b) noexcept
{
    const double q = a / b;
    return quotient_is_exact(a, b, q) ? q : step_down(q);
}
inline double div_up(double a, double b) noexcept
{
    const double q = a / b;
    return quotient_is_exact(a, b, q) ? q : step_up(q);
}

inline bool sqrt_is_exact(double x, double r) noexcept
{
    return r * r == x && product_is_exact(r, r, x);
}
inline double sqrt_down(double x) noexcept
{
    const double r = std::sqrt(x);
    return sqrt_is_exact(x, r) ? r : std::max(0.0, step_down(r));
}
inline double sqrt_up(double x) noexcept
{
    const double r = std::sqrt(x);
    return sqrt_is_exact(x, r) ? r : step_up(r);
}

} // namespace detail

// Closed interval [lo, hi] of doubles. Every arithmetic result contains the
// exact real result for all operand selections. Endpoints are rounded
// outward by one ulp unless the round-to-nearest result is provably exact.
class Interval
{
public:
    constexpr Interval() noexcept = default;

    explicit Interval(double v) : lo_(v), hi_(v)
    {
        if (std::isnan(v)) {
            throw DomainError("interval endpoint is NaN");
        }
    }

    Interval(double lo, double hi) : lo_(lo), hi_(hi)
    {
        if (std::isnan(lo) || std::isnan(hi)) {
            throw DomainError("interval endpoint is NaN");
        }
        if (lo > hi) {
            throw DomainError("interval with lo > hi");
        }
    }

    // [-r, r]; r must be non-negative.
    static Interval symmetric(double r) { return Interval(-r, r); }

    // Encloses the exact value of a decimal literal; width at most one ulp,
    // zero if the literal is representable.
    static Interval enclose(std::string_view decimal);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    double mid() const noexcept
    {
        if (lo_ == hi_) {
            return lo_;
        }
        if (std::isinf(lo_) || std::isinf(hi_)) {
            return (std::isinf(lo_) && std::isinf(hi_)) ? 0.0 : (std::isinf(lo_) ? hi_ : lo_);
        }
        return 0.5 * lo_ + 0.5 * hi_;
    }
    // Upper bound of hi - lo.
    double width() const noexcept { return detail::sub_up(hi_, lo_); }
    double mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }
    // Smallest absolute value over the interval.
    double mig() const noexcept
    {
        if (contains(0.0)) {
            return 0.0;
        }
        return std::min(std::fabs(lo_), std::fabs(hi_));
    }

    bool is_thin() const noexcept { return lo_ == hi_; }
    bool is_zero() const noexcept { return lo_ == 0.0 && hi_ == 0.0; }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains_zero() const noexcept { return contains(0.0); }
    bool subset(Interval b) const noexcept { return b.lo_ <= lo_ && hi_ <= b.hi_; }
    // Sufficient condition for containment in the interior of b.
    bool subset_interior(Interval b) const noexcept { return b.lo_ < lo_ && hi_ < b.hi_; }

    friend bool operator==(Interval a, Interval b) noexcept { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline Interval operator-(Interval a) { return Interval(-a.hi(), -a.lo()); }

inline Interval operator+(Interval a, Interval b)
{
    return Interval(detail::add_down(a.lo(), b.lo()), detail::add_up(a.hi(), b.hi()));
}

inline Interval operator-(Interval a, Interval b)
{
    return Interval(detail::sub_down(a.lo(), b.hi()), detail::sub_up(a.hi(), b.lo()));
}

inline Interval operator*(Interval a, Interval b)
{
    if (a.is_zero() || b.is_zero()) {
        return Interval();
    }
    using detail::mul_down;
    using detail::mul_up;
    const double l1 = mul_down(a.lo(), b.lo()), l2 = mul_down(a.lo(), b.hi());
    const double l3 = mul_down(a.hi(), b.lo()), l4 = mul_down(a.hi(), b.hi());
    const double u1 = mul_up(a.lo(), b.lo()), u2 = mul_up(a.lo(), b.hi());
    const double u3 = mul_up(a.hi(), b.lo()), u4 = mul_up(a.hi(), b.hi());
    return Interval(std::min({l1, l2, l3, l4}), std::max({u1, u2, u3, u4}));
}

inline Interval operator/(Interval a, Interval b)
{
    if (b.contains_zero()) {
        throw DomainError("division by an interval containing zero");
    }
    using detail::div_down;
    using detail::div_up;
    const double l1 = div_down(a.lo(), b.lo()), l2 = div_down(a.lo(), b.hi());
    const double l3 = div_down(a.hi(), b.lo()), l4 = div_down(a.hi(), b.hi());
    const double u1 = div_up(a.lo(), b.lo()), u2 = div_up(a.lo(), b.hi());
    const double u3 = div_up(a.hi(), b.lo()), u4 = div_up(a.hi(), b.hi());
    return Interval(std::min({l1, l2, l3, l4}), std::max({u1, u2, u3, u4}));
}

inline Interval operator+(Interval a, double b) { return a + Interval(b); }
inline Interval operator+(double a, Interval b) { return Interval(a) + b; }
inline Interval operator-(Interval a, double b) { return a - Interval(b); }
inline Interval operator-(double a, Interval b) { return Interval(a) - b; }
inline Interval operator*(Interval a, double b) { return a * Interval(b); }
inline Interval operator*(double a, Interval b) { return Interval(a) * b; }
inline Interval operator/(Interval a, double b) { return a / Interval(b); }

inline Interval& operator+=(Interval& a, Interval b) { return a = a + b; }
inline Interval& operator-=(Interval& a, Interval b) { return a = a - b; }
inline Interval& operator*=(Interval& a, Interval b) { return a = a * b; }

inline Interval scale(Interval a, double s) { return a * Interval(s); }

// Square; tighter than a * a when a straddles zero.
inline Interval sq(Interval a)
{
    using detail::mul_down;
    using detail::mul_up;
    if (a.lo() >= 0.0) {
        return Interval(mul_down(a.lo(), a.lo()), mul_up(a.hi(), a.hi()));
    }
    if (a.hi() <= 0.0) {
        return Interval(mul_down(a.hi(), a.hi()), mul_up(a.lo(), a.lo()));
    }
    return Interval(0.0, std::max(mul_up(a.lo(), a.lo()), mul_up(a.hi(), a.hi())));
}

// Square root of the non-negative part; DomainError if a is entirely negative.
inline Interval sqrt(Interval a)
{
    if (a.hi() < 0.0) {
        throw DomainError("square root of a negative interval");
    }
    return Interval(detail::sqrt_down(std::max(0.0, a.lo())), detail::sqrt_up(a.hi()));
}

inline Interval hull(Interval a, Interval b)
{
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

// std::nullopt is the empty interval.
inline std::optional<Interval> intersect(Interval a, Interval b)
{
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        return std::nullopt;
    }
    return Interval(lo, hi);
}

// Single dispatch point over the elementary operations, used by the
// randomised soundness suite. Unary ops ignore b; scale uses b.mid().
enum class IvOp { add, sub, mul, div, neg, sq, scale };
Interval apply(IvOp op, Interval a, Interval b);

// Bit-exact hexadecimal float text ("0x1.8p+0").
std::string to_hex(double x);
double parse_hex(std::string_view text);

std::ostream& operator<<(std::ostream& os, Interval a);

} // namespace blender

#endif
