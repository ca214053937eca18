#include "blender/rpoly.hpp"

#include <array>
#include <numbers>

namespace blender {

RPoly::RPoly(std::vector<Interval> coeffs, Interval domain) : coeffs_(std::move(coeffs)), domain_(domain)
{
    if (coeffs_.empty()) {
        coeffs_.emplace_back();
    }
}

RPoly RPoly::constant(Interval c, Interval domain) { return RPoly({c}, domain); }

RPoly RPoly::identity(Interval domain) { return RPoly({Interval(), Interval(1.0)}, domain); }

RPoly RPoly::from_doubles(std::span<const double> coeffs, Interval domain)
{
    std::vector<Interval> c;
    c.reserve(coeffs.size());
    for (double v : coeffs) {
        c.emplace_back(v);
    }
    return RPoly(std::move(c), domain);
}

Interval RPoly::eval(Interval x) const
{
    Interval r = coeffs_.back();
    for (int i = degree() - 1; i >= 0; --i) {
        r = r * x + coeffs_[static_cast<std::size_t>(i)];
    }
    return r;
}

double RPoly::eval_mid(double x) const
{
    double r = coeffs_.back().mid();
    for (int i = degree() - 1; i >= 0; --i) {
        r = r * x + coeffs_[static_cast<std::size_t>(i)].mid();
    }
    return r;
}

double RPoly::deriv_mid(double x) const
{
    if (degree() == 0) {
        return 0.0;
    }
    double r = coeffs_.back().mid() * degree();
    for (int i = degree() - 1; i >= 1; --i) {
        r = r * x + coeffs_[static_cast<std::size_t>(i)].mid() * i;
    }
    return r;
}

RPoly RPoly::derivative() const
{
    if (degree() == 0) {
        return RPoly({Interval()}, domain_);
    }
    std::vector<Interval> d;
    d.reserve(coeffs_.size() - 1);
    for (int i = 1; i <= degree(); ++i) {
        d.push_back(coeffs_[static_cast<std::size_t>(i)] * static_cast<double>(i));
    }
    return RPoly(std::move(d), domain_);
}

RPoly& RPoly::operator+=(const RPoly& o)
{
    if (o.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(o.coeffs_.size());
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
        coeffs_[i] += o.coeffs_[i];
    }
    return *this;
}

RPoly& RPoly::operator-=(const RPoly& o)
{
    if (o.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(o.coeffs_.size());
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
        coeffs_[i] -= o.coeffs_[i];
    }
    return *this;
}

RPoly& RPoly::operator+=(Interval c)
{
    coeffs_[0] += c;
    return *this;
}

RPoly operator+(RPoly a, const RPoly& b) { return a += b; }
RPoly operator-(RPoly a, const RPoly& b) { return a -= b; }
RPoly operator+(RPoly p, Interval c) { return p += c; }

RPoly operator*(const RPoly& a, const RPoly& b)
{
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    std::vector<Interval> out(ca.size() + cb.size() - 1);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < cb.size(); ++j) {
            out[i + j] += ca[i] * cb[j];
        }
    }
    return RPoly(std::move(out), b.domain());
}

RPoly operator*(Interval s, const RPoly& p)
{
    std::vector<Interval> out(p.coeffs());
    for (auto& c : out) {
        c = s * c;
    }
    return RPoly(std::move(out), p.domain());
}

RPoly compose(const RPoly& outer, const RPoly& inner)
{
    RPoly r = RPoly::constant(outer.coeffs().back(), inner.domain());
    for (int i = outer.degree() - 1; i >= 0; --i) {
        r = r * inner;
        r += outer.coeffs()[static_cast<std::size_t>(i)];
    }
    return r;
}

namespace {

constexpr int kMaxChebDegree = 128;

// Row j holds the Chebyshev coefficients of u^j.
const std::vector<std::vector<Interval>>& monomial_to_cheb_table()
{
    static const std::vector<std::vector<Interval>> table = [] {
        std::vector<std::vector<Interval>> t;
        t.reserve(kMaxChebDegree + 1);
        t.push_back({Interval(1.0)});
        const Interval half(0.5);
        for (int j = 0; j < kMaxChebDegree; ++j) {
            const auto& prev = t.back();
            std::vector<Interval> next(prev.size() + 1);
            for (std::size_t m = 0; m < prev.size(); ++m) {
                if (prev[m].is_zero()) {
                    continue;
                }
                // u T_0 = T_1, u T_m = (T_{m+1} + T_{m-1}) / 2
                if (m == 0) {
                    next[1] += prev[m];
                } else {
                    const Interval h = prev[m] * half;
                    next[m + 1] += h;
                    next[m - 1] += h;
                }
            }
            t.push_back(std::move(next));
        }
        return t;
    }();
    return table;
}

// h(u) = m0 + m1 u + m2 u^2 + m3 u^3
struct Cubic {
    Interval m0, m1, m2, m3;

    Interval horner(Interval u) const { return ((m3 * u + m2) * u + m1) * u + m0; }
    Interval deriv(Interval u) const { return (Interval(3.0) * m3 * u + Interval(2.0) * m2) * u + m1; }

    // Intersection of Horner and the mean-value form around the midpoint.
    Interval range(Interval u) const
    {
        const Interval c(u.mid());
        const Interval centred = horner(c) + deriv(u) * (u - c);
        const Interval direct = horner(u);
        if (auto both = intersect(centred, direct)) {
            return *both;
        }
        return direct;
    }
};

Interval subdivided_range(const Cubic& h, Interval dom)
{
    constexpr int kPieces = 16;
    const double lo = dom.lo();
    const double step = (dom.hi() - dom.lo()) / kPieces;
    Interval r = h.range(Interval(lo, std::min(dom.hi(), lo + step)));
    for (int i = 1; i < kPieces; ++i) {
        const double a = lo + i * step;
        const double b = (i == kPieces - 1) ? dom.hi() : lo + (i + 1) * step;
        r = hull(r, h.range(Interval(std::min(a, b), b)));
    }
    return r;
}

Interval cubic_head_range(Interval a0, Interval a1, Interval a2, Interval a3)
{
    const Cubic h{a0 - a2, a1 - Interval(3.0) * a3, Interval(2.0) * a2, Interval(4.0) * a3};
    Interval r = hull(a0 + a1 + a2 + a3, a0 - a1 + a2 - a3);

    std::array<Interval, 2> crit;
    int ncrit = 0;
    bool fallback = false;

    if (a3.is_zero()) {
        if (!a2.is_zero()) {
            if (a2.contains_zero()) {
                fallback = true;
            } else {
                crit[ncrit++] = -a1 / (Interval(4.0) * a2);
            }
        }
    } else if (a3.contains_zero()) {
        fallback = true;
    } else {
        // h'(u) = 12 a3 u^2 + 4 a2 u + (a1 - 3 a3)
        const Interval A = Interval(12.0) * a3;
        const Interval B = Interval(4.0) * a2;
        const Interval C = a1 - Interval(3.0) * a3;
        const Interval disc = sq(B) - Interval(4.0) * A * C;
        if (disc.hi() < 0.0) {
            // monotone head
        } else if (disc.lo() >= 0.0) {
            const Interval s = sqrt(disc);
            const Interval den = Interval(2.0) * A;
            crit[ncrit++] = (-B + s) / den;
            crit[ncrit++] = (-B - s) / den;
        } else {
            fallback = true;
        }
    }

    if (fallback) {
        return hull(r, subdivided_range(h, kUnitInterval));
    }
    for (int i = 0; i < ncrit; ++i) {
        if (auto u = intersect(crit[i], kUnitInterval)) {
            r = hull(r, h.range(*u));
        }
    }
    return r;
}

} // namespace

ChebSeries to_chebyshev(const RPoly& p)
{
    if (p.degree() > kMaxChebDegree) {
        throw DomainError("polynomial degree exceeds the Chebyshev conversion table");
    }
    const auto& table = monomial_to_cheb_table();
    ChebSeries s;
    s.coeffs.resize(p.coeffs().size());
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
        const Interval c = p.coeffs()[j];
        if (c.is_zero()) {
            continue;
        }
        const auto& row = table[j];
        // Only T_{j}, T_{j-2}, ... are present in u^j.
        for (std::size_t n = j % 2; n <= j; n += 2) {
            s.coeffs[n] += c * row[n];
        }
    }
    return s;
}

RPoly affine_rescale(const RPoly& p, Interval J)
{
    const Interval lo(J.lo()), hi(J.hi());
    const Interval half(0.5);
    const Interval m = (lo + hi) * half;
    const Interval r = (hi - lo) * half;
    return compose(p.with_domain(kUnitInterval), RPoly({m, r}, kUnitInterval));
}

Interval cheb_range(const ChebSeries& s)
{
    auto a = [&](std::size_t n) { return n < s.coeffs.size() ? s.coeffs[n] : Interval(); };
    Interval tail;
    for (std::size_t n = 4; n < s.coeffs.size(); ++n) {
        tail += Interval(s.coeffs[n].mag());
    }
    const Interval head = cubic_head_range(a(0), a(1), a(2), a(3));
    return head + Interval::symmetric(tail.hi());
}

Interval eval_enclosure(const RPoly& p, Interval J)
{
    if (!J.subset(p.domain())) {
        throw DomainError("enclosure interval is not contained in the polynomial's domain");
    }
    if (p.degree() == 0) {
        return p.coeffs()[0];
    }
    return cheb_range(to_chebyshev(affine_rescale(p, J)));
}

double sup_norm(const RPoly& p, Interval J) { return eval_enclosure(p, J).mag(); }

std::vector<double> chebyshev_nodes(int N)
{
    if (N < 1) {
        throw ConfigError("Chebyshev node set needs N >= 1");
    }
    // -cos(i pi / N) = sin(pi (2i - N) / (2N)); the sine form is exactly odd.
    std::vector<double> x(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        const int num = 2 * i - N;
        if (num == 0) {
            x[static_cast<std::size_t>(i)] = 0.0;
        } else if (num == N || num == -N) {
            x[static_cast<std::size_t>(i)] = num > 0 ? 1.0 : -1.0;
        } else {
            x[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * num / (2.0 * N));
        }
    }
    return x;
}

RPoly interpolate_cheb(std::span<const double> values, int N)
{
    if (static_cast<int>(values.size()) != N + 1) {
        throw ConfigError("interpolation needs N + 1 values");
    }
    const auto x = chebyshev_nodes(N);
    // Newton divided differences, in place.
    std::vector<double> d(values.begin(), values.end());
    for (int j = 1; j <= N; ++j) {
        for (int i = N; i >= j; --i) {
            d[static_cast<std::size_t>(i)] = (d[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(i - 1)]) /
                                             (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - j)]);
        }
    }
    // Expand the Newton form into monomial coefficients.
    std::vector<double> c(static_cast<std::size_t>(N) + 1, 0.0);
    c[0] = d[static_cast<std::size_t>(N)];
    int deg = 0;
    for (int j = N - 1; j >= 0; --j) {
        const double xj = x[static_cast<std::size_t>(j)];
        // c <- c * (x - xj) + d_j
        ++deg;
        for (int i = deg; i >= 1; --i) {
            c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i - 1)] - xj * c[static_cast<std::size_t>(i)];
        }
        c[0] = -xj * c[0] + d[static_cast<std::size_t>(j)];
    }
    return RPoly::from_doubles(c);
}

std::pair<RPoly, RPoly> interpolate_cheb(std::span<const double> values_y, std::span<const double> values_z, int N)
{
    return {interpolate_cheb(values_y, N), interpolate_cheb(values_z, N)};
}

double newton_root(const RPoly& p, double target, double t0, Interval J, NewtonOptions opts)
{
    if (!J.contains(t0)) {
        throw RootError("Newton start point outside its interval");
    }
    double t = t0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double r = p.eval_mid(t) - target;
        if (std::fabs(r) <= opts.residual_tol) {
            return t;
        }
        const double d = p.deriv_mid(t);
        if (d == 0.0 || !std::isfinite(d)) {
            throw RootError("Newton iteration hit a vanishing derivative");
        }
        t -= r / d;
        if (!J.contains(t)) {
            throw RootError("Newton iterate left its interval");
        }
    }
    throw RootError("Newton iteration did not converge");
}

double bracketed_root(const RPoly& p, double target, double lo, double hi)
{
    auto f = [&](double t) { return p.eval_mid(t) - target; };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw RootError("no sign change on bracket");
    }
    double t = lo - flo * (hi - lo) / (fhi - flo);
    if (!(t > lo && t < hi)) {
        t = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 200; ++it) {
        const double ft = f(t);
        if (std::fabs(ft) <= 1e-15 || ft == 0.0) {
            return t;
        }
        if ((ft < 0.0) == (flo < 0.0)) {
            lo = t;
            flo = ft;
        } else {
            hi = t;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t))) {
            return t;
        }
        const double d = p.deriv_mid(t);
        double next = (d != 0.0) ? t - ft / d : lo;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        t = next;
    }
    return t;
}

} // namespace blender
