#ifndef BLENDER_MODEL_HPP
#define BLENDER_MODEL_HPP

#include <array>
#include <utility>
#include <vector>

#include "blender/interval.hpp"
#include "blender/rpoly.hpp"

namespace blender {

// f(x, y, z) = (a x^2 + b y + c, x, xi z + x)
struct HenonParams {
    Interval a;
    Interval b;
    Interval c;
    Interval xi;

    HenonParams midpoint() const
    {
        return {Interval(a.mid()), Interval(b.mid()), Interval(c.mid()), Interval(xi.mid())};
    }
};

// Parameters of F(x, y, z) = (y, mu + y^2 + beta x, xi z + y), mapped through
// the conjugacy (x, y, z) -> (a y, a x, a z): mu = a c, b = beta.
HenonParams henon_from_F(double mu, double beta_F, Interval xi, double a);

// What must lie in D for a curve to be admitted: the curve itself, or its
// whole big tube.
enum class DomainCheck { curve, tube };

// Tube sizes. eps_y bounds both the y-value and the y-slope; small tubes have
// z-value bound eps_z, big tubes k * eps_z; both share the z-slope bound
// eps_z_hat = delta * eps_z.
struct TubeConfig {
    double eps_y = 0.0;
    double eps_z = 0.0;
    double eps_z_hat = 0.0;
    int n = 0;
    int k = 0;
    double delta = 0.0;
    int nodes = 0; // collocation node count; interpolant degree is nodes - 1
    double y0 = 0.0;
    double t_margin = 0.0;
    DomainCheck domain_check = DomainCheck::curve;

    int degree() const noexcept { return nodes - 1; }
};

// D = I x y_range x z_range. I is stored shrunk inward, so it lies inside
// [-1 + b eps_y, 1 - b eps_y] for every b in the parameter interval.
struct DomainBox {
    Interval I;
    Interval y_range;
    Interval z_range;
};

// alpha(t) = (t, py(t), pz(t)); polynomials are kept on [-1, 1].
struct UCurve {
    RPoly py;
    RPoly pz;

    friend bool operator==(const UCurve&, const UCurve&) = default;
};

struct ConeImage {
    Interval Lx;
    Interval Ly;
    Interval Lz;
};

using Matrix3 = std::array<std::array<Interval, 3>, 3>;

struct Model {
    HenonParams par;
    TubeConfig tube;
    DomainBox box;
};

// User-facing tube settings; derived quantities are filled in by make_model.
struct TubeSettings {
    double eps_y = 0.02;
    double eps_z = 1.1;
    int n = 3;
    int k = 2;
    int nodes = 3;
    double y0 = 0.0;
    double t_margin = 0.0;
    DomainCheck domain_check = DomainCheck::curve;
};

// 2 (n - k) / ((n - 1) |I|), rounded down.
double delta(int k, int n, double I_len);

DomainBox make_domain_box(const HenonParams& par, double eps_y);
Model make_model(const HenonParams& par, const TubeSettings& settings);

// Rigorous re-check of every stored derived quantity (I, delta, eps_z_hat,
// D). Throws ConfigError naming the first inconsistency.
void validate(const Model& m);

// beta_1(t) = (t, y0, 0)
UCurve initial_curve(const TubeConfig& cfg);

// Offsets of the n small tubes, uniformly spaced over
// [-eps_z (k - 1), eps_z (k - 1)], as enclosures of the exact values.
std::vector<Interval> split_offsets(const TubeConfig& cfg);
std::vector<UCurve> split(const UCurve& beta, const TubeConfig& cfg);
UCurve split_slot(const UCurve& beta, const TubeConfig& cfg, int slot);

// alpha(I) lies in D.
bool curve_in_domain(const UCurve& alpha, const Model& m);
// Big tube around alpha lies in D.
bool big_tube_in_domain(const UCurve& alpha, const Model& m);
// Dispatches on m.tube.domain_check.
bool admissible(const UCurve& alpha, const Model& m);

// a x^2 + b py(x) + c
RPoly xhat(const UCurve& alpha, const HenonParams& par);

// Ry(x) = x - qy(xhat(x)), Rz(x) = xi pz(x) + x - qz(xhat(x))
std::pair<RPoly, RPoly> residuals(const UCurve& alpha, const UCurve& beta, const HenonParams& par);

// Enclosure of D f_{alpha,beta} over T x eps_y x eps_z restricted to points
// whose image lies in the I-slab.
Matrix3 jacobian_enclosure(const UCurve& alpha, const UCurve& beta, const HenonParams& par, Interval T,
                           const TubeConfig& cfg);

// [J] (1, eps_y, eps_z_hat)
ConeImage cone_image(const Matrix3& J, const TubeConfig& cfg);

// Point evaluation of f and of f_{alpha,beta} on the midpoint selection.
std::array<double, 3> henon_map(const HenonParams& par, const std::array<double, 3>& p);
std::array<double, 3> fab_point(const UCurve& alpha, const UCurve& beta, const HenonParams& par,
                                const std::array<double, 3>& p);

} // namespace blender

#endif
