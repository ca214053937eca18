#ifndef BLENDER_RPOLY_HPP
#define BLENDER_RPOLY_HPP

#include <span>
#include <utility>
#include <vector>

#include "blender/interval.hpp"

namespace blender {

inline const Interval kUnitInterval{-1.0, 1.0};

// Univariate polynomial with interval coefficients in the monomial basis
// (index = degree) over a domain interval. Any real polynomial whose
// coefficients are picked pointwise from coeffs() is a "selection"; every
// enclosure produced from an RPoly contains the values of all selections.
class RPoly
{
public:
    RPoly() : coeffs_{Interval()}, domain_(kUnitInterval) {}
    explicit RPoly(std::vector<Interval> coeffs, Interval domain = kUnitInterval);

    static RPoly constant(Interval c, Interval domain = kUnitInterval);
    static RPoly identity(Interval domain = kUnitInterval);
    static RPoly from_doubles(std::span<const double> coeffs, Interval domain = kUnitInterval);
    static RPoly from_doubles(std::initializer_list<double> coeffs, Interval domain = kUnitInterval)
    {
        return from_doubles(std::span<const double>(coeffs.begin(), coeffs.size()), domain);
    }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Interval>& coeffs() const noexcept { return coeffs_; }
    Interval coeff(int i) const noexcept
    {
        return (i >= 0 && i <= degree()) ? coeffs_[static_cast<std::size_t>(i)] : Interval();
    }
    Interval domain() const noexcept { return domain_; }

    // Natural interval extension by Horner's scheme.
    Interval eval(Interval x) const;
    // Evaluation of the midpoint selection (non-rigorous).
    double eval_mid(double x) const;
    double deriv_mid(double x) const;

    RPoly with_domain(Interval d) const { return RPoly(coeffs_, d); }
    RPoly derivative() const;

    RPoly& operator+=(const RPoly& o);
    RPoly& operator-=(const RPoly& o);
    RPoly& operator+=(Interval c);

    friend bool operator==(const RPoly& a, const RPoly& b)
    {
        return a.coeffs_ == b.coeffs_ && a.domain_ == b.domain_;
    }

private:
    std::vector<Interval> coeffs_;
    Interval domain_;
};

RPoly operator+(RPoly a, const RPoly& b);
RPoly operator-(RPoly a, const RPoly& b);
RPoly operator*(const RPoly& a, const RPoly& b);
RPoly operator*(Interval s, const RPoly& p);
RPoly operator+(RPoly p, Interval c);

inline RPoly derivative(const RPoly& p) { return p.derivative(); }

// Coefficients a_n of T_n.
struct ChebSeries {
    std::vector<Interval> coeffs;
};

// Basis change for a polynomial on [-1, 1].
ChebSeries to_chebyshev(const RPoly& p);

// Coefficients of u -> p(m + r u), with [m - r, m + r] = J, on [-1, 1].
RPoly affine_rescale(const RPoly& p, Interval J);

// Range of a Chebyshev series over [-1, 1]: the cubic head is bounded via
// its critical points, the remaining terms by the sum of |a_n|.
Interval cheb_range(const ChebSeries& s);

// Enclosure of {q(x) : x in J, q a selection of p}. J must lie in p.domain().
Interval eval_enclosure(const RPoly& p, Interval J);

// Upper bound of sup_{x in J} |p(x)|.
double sup_norm(const RPoly& p, Interval J);

// Coefficients of outer(inner(x)); the result lives on inner's domain.
RPoly compose(const RPoly& outer, const RPoly& inner);

// x_i = -cos(i pi / N), i = 0..N, with exact 0 and +-1 where they occur.
std::vector<double> chebyshev_nodes(int N);

// Degree-N interpolant through (x_i, values[i]) at the Chebyshev nodes,
// returned with thin coefficients. values.size() must be N + 1.
RPoly interpolate_cheb(std::span<const double> values, int N);
std::pair<RPoly, RPoly> interpolate_cheb(std::span<const double> values_y, std::span<const double> values_z,
                                         int N);

struct NewtonOptions {
    double residual_tol = 1e-13;
    int max_iterations = 50;
};

// Newton's method on the midpoint selection for p(t) = target, started at
// t0. Throws RootError on non-convergence or when an iterate leaves J.
double newton_root(const RPoly& p, double target, double t0, Interval J, NewtonOptions opts = {});

// Root of p(t) = target in [lo, hi] where p(lo) - target and p(hi) - target
// differ in sign: Newton from the secant guess, bisection as a fallback.
double bracketed_root(const RPoly& p, double target, double lo, double hi);

} // namespace blender

#endif
