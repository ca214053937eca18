#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "properties.hpp"

using namespace blender;
using doctest::Approx;

namespace {

Model base_model() { return props::henon_model(1.2, 1.3, 0.02, 0.5, 3, 3); }

const Certificate& cert()
{
    static const Certificate c = construct(base_model());
    return c;
}

} // namespace

TEST_CASE("through interval of the seed curve")
{
    const Model m = base_model();
    const UCurve b1 = initial_curve(m.tube);
    const ThroughInterval ti = compute_T(b1, m.par, m.tube);
    CHECK(ti.T.lo() == Approx(std::sqrt(1.369) / 2).epsilon(1e-10));
    CHECK(ti.T.hi() == Approx(std::sqrt(3.381) / 2).epsilon(1e-10));
    CHECK(std::fabs(ti.T.lo() - std::sqrt(1.369) / 2) < 1e-9);
    CHECK(std::fabs(ti.T.hi() - std::sqrt(3.381) / 2) < 1e-9);
    CHECK(ti.t_star == Approx(0.7705518).epsilon(1e-7));
    CHECK(ti.t_star > 0);
    CHECK(ti.orientation == Orientation::increasing);
}

TEST_CASE("through interval picks the branch closer to zero")
{
    const Model m = base_model();
    // z = xi * pz(t*) + t*: a positive z offset pushes the positive branch away
    UCurve up = initial_curve(m.tube);
    up.pz = RPoly::constant(Interval(0.1));
    const ThroughInterval a = compute_T(up, m.par, m.tube);
    CHECK(a.t_star < 0);
    CHECK(a.orientation == Orientation::decreasing);
    CHECK(a.T.lo() == Approx(-std::sqrt(3.381) / 2).epsilon(1e-10));
    CHECK(a.T.hi() == Approx(-std::sqrt(1.369) / 2).epsilon(1e-10));

    up.pz = RPoly::constant(Interval(-0.1));
    CHECK(compute_T(up, m.par, m.tube).t_star > 0);
}

TEST_CASE("through interval needs a stretching branch")
{
    Model m = base_model();
    m.par.c = Interval(0.0);
    CHECK_THROWS_AS(compute_T(initial_curve(m.tube), m.par, m.tube), CoverageError);
}

TEST_CASE("stretching condition")
{
    const Model m = base_model();
    const UCurve b1 = initial_curve(m.tube);
    const Interval T = compute_T(b1, m.par, m.tube).T;
    CHECK(check_cond1(b1, b1, m, T));
    CHECK_FALSE(check_cond1(b1, b1, m, m.box.I));
    CHECK_FALSE(check_cond1(b1, b1, m, Interval(0.5, 1.0)));
    // endpoints whose fibres stay inside the slab
    CHECK_FALSE(check_cond1(b1, b1, m, Interval(0.6, 0.9)));
}

TEST_CASE("containment condition")
{
    const Model m = base_model();
    const UCurve b1 = initial_curve(m.tube);
    const Interval T = compute_T(b1, m.par, m.tube).T;
    CHECK_FALSE(check_cond2(b1, b1, m, T));
    CHECK_FALSE(check_cond2(b1, b1, m, Interval(0.5, 1.0)));

    // an exact collocation target still fails once xi >= k
    const Model big = props::henon_model(2.5, 2.5, 0.02, 0.5, 3, 3);
    const ImageSamples img = sample_image(b1, big);
    const auto [qy, qz] = interpolate_cheb(img.y, img.z, big.tube.degree());
    const UCurve beta{qy, qz};
    CHECK_FALSE(check_cond2(b1, beta, big, img.through.T));
}

TEST_CASE("cone condition")
{
    const Model m = base_model();
    const UCurve b1 = initial_curve(m.tube);
    const Interval T = compute_T(b1, m.par, m.tube).T;
    CHECK_FALSE(check_cond3(b1, b1, m, T));
    const ConeImage L = cone_image(jacobian_enclosure(b1, b1, m.par, T, m.tube), m.tube);
    const Interval r = L.Ly / L.Lx;
    CHECK(r.lo() == Approx(0.136).epsilon(5e-3));
    CHECK(r.hi() == Approx(0.214).epsilon(5e-3));
    CHECK(r.subset(Interval(0.13 * 0.99, 0.22 * 1.01)));

    // xhat' = 8t changes sign on T
    CHECK_FALSE(check_cond3(b1, b1, m, Interval(-0.1, 0.1)));
    CHECK(cone_image(jacobian_enclosure(b1, b1, m.par, Interval(-0.1, 0.1), m.tube), m.tube).Lx.contains(0.0));
}

TEST_CASE("seed curve is not a through box for itself")
{
    const Model m = base_model();
    const UCurve b1 = initial_curve(m.tube);
    const Interval T = compute_T(b1, m.par, m.tube).T;
    CHECK_FALSE(is_through_box(b1, b1, m, T));
    const BoxVerdict v = check_through_box(b1, prepare_target(b1, m), m, T);
    CHECK((v == BoxVerdict::cond2_y || v == BoxVerdict::cond2_z));
    CHECK(check_through_box(b1, prepare_target(b1, m), m, Interval(0.5, 1.0)) == BoxVerdict::t_not_in_I);
    CHECK(to_string(BoxVerdict::pass) == "pass");
}

TEST_CASE("constructed records pass every condition")
{
    const Certificate& c = cert();
    REQUIRE(c.maps.size() == 3 * c.curves.size());
    for (const MapRecord& rec : c.maps) {
        const UCurve a = split_slot(c.curves[rec.parent], c.model.tube, rec.slot);
        const UCurve& b = c.curves[rec.target];
        CHECK(check_cond1(a, b, c.model, rec.T));
        CHECK(check_cond2(a, b, c.model, rec.T));
        CHECK(check_cond3(a, b, c.model, rec.T));
        CHECK(is_through_box(a, b, c.model, rec.T));
    }
}

TEST_CASE("target outside the domain is refused")
{
    Certificate c = cert();
    const MapRecord& rec = c.maps.front();
    const UCurve a = split_slot(c.curves[rec.parent], c.model.tube, rec.slot);
    UCurve b = c.curves[rec.target];
    b.pz += Interval(10.0);
    CHECK(check_through_box(a, prepare_target(b, c.model), c.model, rec.T) == BoxVerdict::target_outside_D);
}

TEST_CASE("sampled soundness of accepted boxes")
{
    const auto o = props::throughbox_soundness(cert(), 60, 20, 1000);
    INFO(o.first);
    CHECK(o.trials > 0);
    CHECK(o.failures == 0);
}

TEST_CASE("containment is monotone in the tube sizes")
{
    const Certificate& c = cert();
    for (double s : {1.01, 1.1, 1.5, 3.0}) {
        Model w = c.model;
        w.tube.eps_y *= s;
        w.tube.eps_z *= s;
        w.tube.eps_z_hat *= s;
        for (const MapRecord& rec : c.maps) {
            const UCurve a = split_slot(c.curves[rec.parent], c.model.tube, rec.slot);
            const UCurve& b = c.curves[rec.target];
            if (check_cond2(a, b, c.model, rec.T)) {
                CHECK(check_cond2(a, b, w, rec.T));
            }
        }
    }
}

TEST_CASE("orientation is coherent with the cone image")
{
    const Certificate& c = cert();
    for (const MapRecord& rec : c.maps) {
        const UCurve a = split_slot(c.curves[rec.parent], c.model.tube, rec.slot);
        const UCurve& b = c.curves[rec.target];
        if (!(check_cond1(a, b, c.model, rec.T) && check_cond3(a, b, c.model, rec.T))) {
            continue;
        }
        const ConeImage L = cone_image(jacobian_enclosure(a, b, c.model.par, rec.T, c.model.tube), c.model.tube);
        CHECK_FALSE(L.Lx.contains(0.0));
        const Orientation o = compute_T(a, c.model.par.midpoint(), c.model.tube).orientation;
        CHECK((L.Lx.lo() > 0) == (o == Orientation::increasing));
    }
}
