#include "blender/interval.hpp"

#include <cerrno>
#include <cfenv>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace blender {

namespace {

// glibc strtod honours the dynamic rounding mode.
double strtod_rounded(const std::string& s, int mode)
{
    const int saved = std::fegetround();
    std::fesetround(mode);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    std::fesetround(saved);
    if (end == s.c_str() || *end != '\0') {
        throw ConfigError("not a number: '" + s + "'");
    }
    return v;
}

} // namespace

Interval Interval::enclose(std::string_view decimal)
{
    const std::string s(decimal);
    const double lo = strtod_rounded(s, FE_DOWNWARD);
    const double hi = strtod_rounded(s, FE_UPWARD);
    if (std::isnan(lo) || std::isnan(hi)) {
        throw ConfigError("NaN literal: '" + s + "'");
    }
    return Interval(lo, hi);
}

Interval apply(IvOp op, Interval a, Interval b)
{
    switch (op) {
    case IvOp::add:
        return a + b;
    case IvOp::sub:
        return a - b;
    case IvOp::mul:
        return a * b;
    case IvOp::div:
        return a / b;
    case IvOp::neg:
        return -a;
    case IvOp::sq:
        return sq(a);
    case IvOp::scale:
        return scale(a, b.mid());
    }
    throw DomainError("unknown interval operation");
}

std::string to_hex(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_hex(std::string_view text)
{
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw FormatError("malformed floating-point literal '" + s + "'");
    }
    return v;
}

std::ostream& operator<<(std::ostream& os, Interval a)
{
    return os << '[' << a.lo() << ", " << a.hi() << ']';
}

} // namespace blender
