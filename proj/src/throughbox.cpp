#include "blender/throughbox.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace blender {

namespace {

constexpr int kBranchSamples = 512;

struct Branch {
    double t_lo;
    double t_hi;
    double t_star;
    Orientation orientation;
};

std::vector<Branch> covering_branches(const RPoly& xh, double level)
{
    std::vector<double> t(kBranchSamples + 1), v(kBranchSamples + 1);
    for (int j = 0; j <= kBranchSamples; ++j) {
        // symmetric grid so that even curves give mirrored branches
        t[j] = (j == kBranchSamples / 2) ? 0.0 : (2.0 * j - kBranchSamples) / kBranchSamples;
        v[j] = xh.eval_mid(t[j]);
    }
    std::vector<Branch> out;
    for (int j = 0; j < kBranchSamples; ++j) {
        if ((v[j] < 0.0) == (v[j + 1] < 0.0)) {
            continue;
        }
        const bool increasing = v[j + 1] > v[j];
        const double ts = bracketed_root(xh, 0.0, t[j], t[j + 1]);
        // increasing: -level on the left, +level on the right; mirrored otherwise
        const double left_target = increasing ? -level : level;
        const double right_target = -left_target;
        auto beyond = [](double val, double target) { return target < 0 ? val < target : val > target; };

        int il = j;
        while (il >= 0 && !beyond(v[il], left_target)) {
            --il;
        }
        int ir = j + 1;
        while (ir <= kBranchSamples && !beyond(v[ir], right_target)) {
            ++ir;
        }
        if (il < 0 || ir > kBranchSamples) {
            continue;
        }
        const double lo = bracketed_root(xh, left_target, t[il], t[il + 1]);
        const double hi = bracketed_root(xh, right_target, t[ir - 1], t[ir]);
        out.push_back({lo, hi, ts, increasing ? Orientation::increasing : Orientation::decreasing});
    }
    return out;
}

} // namespace

ThroughInterval compute_T(const UCurve& alpha, const HenonParams& par, const TubeConfig& cfg)
{
    const RPoly xh = xhat(alpha, par);
    const double level = 1.0 + par.b.hi() * cfg.eps_y + cfg.t_margin;
    const auto branches = covering_branches(xh, level);
    if (branches.empty()) {
        throw CoverageError("no monotone branch of the curve's image stretches across [-1, 1]");
    }
    const double xi = par.xi.mid();
    std::optional<Branch> best;
    double best_z = 0.0;
    for (const Branch& br : branches) {
        const double z = std::fabs(xi * alpha.pz.eval_mid(br.t_star) + br.t_star);
        if (!best) {
            best = br;
            best_z = z;
            continue;
        }
        const double tol = 1e-12 * std::max(1.0, best_z);
        if (z < best_z - tol || (std::fabs(z - best_z) <= tol && br.t_star > 0.0 && best->t_star <= 0.0)) {
            best = br;
            best_z = z;
        }
    }
    return {Interval(best->t_lo, best->t_hi), best->orientation, best->t_star};
}

PreparedTarget prepare_target(const UCurve& beta, const Model& m)
{
    PreparedTarget p;
    p.curve = beta;
    p.dqy = beta.py.derivative();
    p.dqz = beta.pz.derivative();
    p.range_dqy = eval_enclosure(p.dqy, kUnitInterval);
    p.range_dqz = eval_enclosure(p.dqz, kUnitInterval);
    p.norm_dqy = p.range_dqy.mag();
    p.norm_dqz = p.range_dqz.mag();
    p.norm_d2qy = sup_norm(p.dqy.derivative(), kUnitInterval);
    p.norm_d2qz = sup_norm(p.dqz.derivative(), kUnitInterval);
    p.in_domain = admissible(beta, m);
    return p;
}

std::string_view to_string(BoxVerdict v)
{
    switch (v) {
    case BoxVerdict::pass:
        return "pass";
    case BoxVerdict::t_not_in_I:
        return "T not inside I";
    case BoxVerdict::target_outside_D:
        return "target big tube leaves D";
    case BoxVerdict::cond1:
        return "stretching condition";
    case BoxVerdict::cond2_y:
        return "containment condition (y)";
    case BoxVerdict::cond2_z:
        return "containment condition (z)";
    case BoxVerdict::cond3_lx:
        return "cone condition (Lx contains 0)";
    case BoxVerdict::cond3_y:
        return "cone condition (y slope)";
    case BoxVerdict::cond3_z:
        return "cone condition (z slope)";
    }
    return "unknown";
}

namespace {

bool stretches(const RPoly& xh, const Model& m, Interval T)
{
    const Interval fiber = m.par.b * Interval::symmetric(m.tube.eps_y);
    const Interval left = xh.eval(Interval(T.lo())) + fiber;
    const Interval right = xh.eval(Interval(T.hi())) + fiber;
    const Interval I = m.box.I;
    const bool up = left.hi() < I.lo() && right.lo() > I.hi();
    const bool down = left.lo() > I.hi() && right.hi() < I.lo();
    return up || down;
}

struct Residuals {
    RPoly ry;
    RPoly rz;
};

Residuals make_residuals(const UCurve& alpha, const RPoly& xh, const UCurve& beta, const HenonParams& par)
{
    const RPoly id = RPoly::identity(alpha.py.domain());
    return {id - compose(beta.py, xh), par.xi * alpha.pz + id - compose(beta.pz, xh)};
}

// 0 = pass, 1 = y fails, 2 = z fails
int containment(const Residuals& r, const PreparedTarget& beta, const Model& m, Interval T)
{
    const double ey = m.tube.eps_y;
    const Interval bey = Interval(m.par.b.mag()) * Interval(ey);
    const Interval y = Interval(eval_enclosure(r.ry, T).mag()) + Interval(beta.norm_dqy) * bey;
    if (!(y.hi() < ey)) {
        return 1;
    }
    const Interval z = Interval(eval_enclosure(r.rz, T).mag()) + Interval(m.par.xi.mag()) * Interval(m.tube.eps_z) +
                       Interval(beta.norm_dqz) * bey;
    const double kez = (Interval(static_cast<double>(m.tube.k)) * Interval(m.tube.eps_z)).lo();
    if (!(z.hi() < kez)) {
        return 2;
    }
    return 0;
}

Matrix3 jacobian_prepared(const RPoly& dxh, const Residuals& r, const PreparedTarget& beta, const Model& m,
                          Interval T)
{
    const Interval bey = Interval(m.par.b.mag()) * Interval(m.tube.eps_y);
    const Interval shift_y = Interval::symmetric((Interval(beta.norm_d2qy) * bey).hi());
    const Interval shift_z = Interval::symmetric((Interval(beta.norm_d2qz) * bey).hi());
    const Interval j11 = eval_enclosure(dxh, T);
    Matrix3 J;
    J[0] = {j11, m.par.b, Interval()};
    J[1] = {eval_enclosure(r.ry.derivative(), T) + j11 * shift_y, -m.par.b * beta.range_dqy, Interval()};
    J[2] = {eval_enclosure(r.rz.derivative(), T) + j11 * shift_z, -m.par.b * beta.range_dqz, m.par.xi};
    return J;
}

BoxVerdict cone(const ConeImage& L, const TubeConfig& cfg)
{
    if (L.Lx.contains_zero()) {
        return BoxVerdict::cond3_lx;
    }
    if (!(L.Ly / L.Lx).subset_interior(Interval::symmetric(cfg.eps_y))) {
        return BoxVerdict::cond3_y;
    }
    if (!(L.Lz / L.Lx).subset_interior(Interval::symmetric(cfg.eps_z_hat))) {
        return BoxVerdict::cond3_z;
    }
    return BoxVerdict::pass;
}

} // namespace

BoxVerdict check_through_box(const UCurve& alpha, const PreparedTarget& beta, const Model& m, Interval T)
{
    if (!T.subset_interior(m.box.I)) {
        return BoxVerdict::t_not_in_I;
    }
    if (!beta.in_domain) {
        return BoxVerdict::target_outside_D;
    }
    const RPoly xh = xhat(alpha, m.par);
    if (!stretches(xh, m, T)) {
        return BoxVerdict::cond1;
    }
    const Residuals r = make_residuals(alpha, xh, beta.curve, m.par);
    switch (containment(r, beta, m, T)) {
    case 1:
        return BoxVerdict::cond2_y;
    case 2:
        return BoxVerdict::cond2_z;
    default:
        break;
    }
    const Matrix3 J = jacobian_prepared(xh.derivative(), r, beta, m, T);
    return cone(cone_image(J, m.tube), m.tube);
}

bool check_cond1(const UCurve& alpha, const UCurve&, const Model& m, Interval T)
{
    if (!T.subset_interior(m.box.I)) {
        return false;
    }
    return stretches(xhat(alpha, m.par), m, T);
}

bool check_cond2(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T)
{
    if (!T.subset_interior(m.box.I)) {
        return false;
    }
    const PreparedTarget p = prepare_target(beta, m);
    const Residuals r = make_residuals(alpha, xhat(alpha, m.par), beta, m.par);
    return containment(r, p, m, T) == 0;
}

bool check_cond3(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T)
{
    if (!T.subset_interior(m.box.I)) {
        return false;
    }
    const Matrix3 J = jacobian_enclosure(alpha, beta, m.par, T, m.tube);
    return cone(cone_image(J, m.tube), m.tube) == BoxVerdict::pass;
}

bool is_through_box(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T)
{
    return check_through_box(alpha, prepare_target(beta, m), m, T) == BoxVerdict::pass;
}

} // namespace blender
