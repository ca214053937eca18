#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "properties.hpp"

using namespace blender;

TEST_CASE("exact endpoints stay exact")
{
    CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
    CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));
    CHECK(Interval(1, 2) / Interval(-2, -1) == Interval(-2, -0.5));
    CHECK(Interval(1, 2) - Interval(3, 4) == Interval(-3, -1));
    CHECK(-Interval(1, 2) == Interval(-2, -1));
}

TEST_CASE("inexact results are widened outward")
{
    const Interval third = Interval(1.0) / Interval(3.0);
    CHECK(third.lo() < third.hi());
    // one step either side of the nearest double
    CHECK(std::nextafter(third.lo(), 1.0) == 1.0 / 3.0);
    CHECK(std::nextafter(third.hi(), 0.0) == 1.0 / 3.0);
    const Interval s = Interval(0.1) + Interval(0.2);
    CHECK(s.contains(0.30000000000000004));
    CHECK(s.lo() < s.hi());
}

TEST_CASE("division by an interval containing zero")
{
    CHECK_THROWS_AS(Interval(1, 2) / Interval(-1, 1), DomainError);
    CHECK_THROWS_AS(Interval(1, 2) / Interval(0, 1), DomainError);
    CHECK_THROWS_AS(Interval(1, 2) / Interval(0.0), DomainError);
}

TEST_CASE("construction rejects NaN and reversed endpoints")
{
    CHECK_THROWS_AS(Interval(2, 1), DomainError);
    CHECK_THROWS_AS(Interval(std::nan(""), 1), DomainError);
    CHECK_THROWS_AS(Interval(std::nan("")), DomainError);
}

TEST_CASE("decimal literal enclosure")
{
    const Interval t = Interval::enclose("0.1");
    CHECK(t.contains(0.1));
    CHECK(t.lo() < t.hi());
    CHECK(std::nextafter(t.lo(), 1.0) == t.hi());
    // exactly representable literals stay thin
    CHECK(Interval::enclose("-2.375") == Interval(-2.375));
    CHECK(Interval::enclose("4") == Interval(4.0));
    const Interval b = Interval::enclose("0.3");
    // the nearest double to 0.3 lies below 3/10
    CHECK(b.lo() == 0.3);
    CHECK(b.hi() == std::nextafter(0.3, 1.0));
    CHECK_THROWS_AS(Interval::enclose("abc"), ConfigError);
    CHECK_THROWS_AS(Interval::enclose(""), ConfigError);
    CHECK_THROWS_AS(Interval::enclose("1.5x"), ConfigError);
}

TEST_CASE("queries")
{
    CHECK(Interval(0, 2).mid() == 1.0);
    CHECK(Interval(-3, 2).mag() == 3.0);
    CHECK(Interval(-3, 2).mig() == 0.0);
    CHECK(Interval(2, 5).mig() == 2.0);
    CHECK(Interval(1, 3).width() == 2.0);
    CHECK(Interval(1, 2).subset_interior(Interval(0, 3)));
    CHECK_FALSE(Interval(1, 2).subset_interior(Interval(1, 3)));
    CHECK(Interval(1, 2).subset(Interval(1, 3)));
    CHECK_FALSE(Interval(0, 2).subset(Interval(1, 3)));
    CHECK(Interval(-1, 1).contains_zero());
    CHECK(Interval::symmetric(0.5) == Interval(-0.5, 0.5));
}

TEST_CASE("hull and intersection")
{
    CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
    const auto i = intersect(Interval(0, 2), Interval(1, 3));
    REQUIRE(i.has_value());
    CHECK(*i == Interval(1, 2));
    CHECK_FALSE(intersect(Interval(0, 1), Interval(2, 3)).has_value());
    CHECK(intersect(Interval(0, 1), Interval(1, 3)).value() == Interval(1, 1));
}

TEST_CASE("square is tighter than self-multiplication")
{
    CHECK(sq(Interval(-1, 2)) == Interval(0, 4));
    CHECK(Interval(-1, 2) * Interval(-1, 2) == Interval(-2, 4));
    CHECK(sq(Interval(-3, -2)) == Interval(4, 9));
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10000; ++t) {
        const Interval a = props::random_interval(rng);
        const Interval s = sq(a);
        CHECK(s.subset(a * a));
        if (a.contains_zero()) {
            CHECK(s.lo() == 0.0);
        }
        CHECK(s.lo() >= 0.0);
    }
}

TEST_CASE("soundness against exact error-free oracles")
{
    const auto o = props::interval_soundness(100000);
    INFO(o.first);
    CHECK(o.trials == 100000);
    CHECK(o.failures == 0);
}

TEST_CASE("inclusion monotonicity")
{
    std::mt19937_64 rng(12);
    const IvOp ops[] = {IvOp::add, IvOp::sub, IvOp::mul, IvOp::div, IvOp::neg, IvOp::sq};
    int failures = 0;
    for (int t = 0; t < 20000; ++t) {
        const IvOp op = ops[t % 6];
        const Interval a = props::random_interval(rng);
        Interval b = props::random_interval(rng);
        while (op == IvOp::div && b.contains_zero()) {
            b = props::random_interval(rng);
        }
        // shrink to a random sub-interval
        auto shrink = [&](Interval v) {
            double p = props::sample_in(v, rng, 2), q = props::sample_in(v, rng, 3);
            if (p > q) {
                std::swap(p, q);
            }
            return Interval(p, q);
        };
        const Interval a2 = shrink(a), b2 = shrink(b);
        if (!apply(op, a2, b2).subset(apply(op, a, b))) {
            ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("hex serialisation is bit exact")
{
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
        const double v = props::random_bits_double(rng);
        CHECK(props::same_bits(parse_hex(to_hex(v)), v));
    }
    CHECK(to_hex(1.5) == "0x1.8p+0");
    CHECK(props::same_bits(parse_hex(to_hex(-0.0)), -0.0));
    CHECK(parse_hex(to_hex(std::numeric_limits<double>::denorm_min())) == std::numeric_limits<double>::denorm_min());
    CHECK_THROWS_AS(parse_hex("0x1.8p+0junk"), FormatError);
    CHECK_THROWS_AS(parse_hex(""), FormatError);
}
