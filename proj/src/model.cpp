#include "blender/model.hpp"

#include <string>

namespace blender {

HenonParams henon_from_F(double mu, double beta_F, Interval xi, double a)
{
    if (a == 0.0) {
        throw ConfigError("conjugacy scale a must be non-zero");
    }
    return {Interval(a), Interval(beta_F), Interval(mu) / Interval(a), xi};
}

double delta(int k, int n, double I_len)
{
    if (!(n > k && k > 1)) {
        throw ConfigError("splitting needs n > k > 1 (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    if (!(I_len > 0.0)) {
        throw ConfigError("interval length must be positive");
    }
    const Interval num(2.0 * (n - k));
    const Interval den = Interval(static_cast<double>(n - 1)) * Interval(I_len);
    return (num / den).lo();
}

DomainBox make_domain_box(const HenonParams& par, double eps_y)
{
    const Interval shrink = par.b * Interval(eps_y);
    // Inner bounds of [-1 + b eps_y, 1 - b eps_y] over all b.
    const double lo = (Interval(-1.0) + Interval(shrink.hi())).hi();
    const double hi = (Interval(1.0) - Interval(shrink.hi())).lo();
    if (!(lo < hi)) {
        throw ConfigError("b * eps_y leaves an empty interval I");
    }
    if (!(par.xi.hi() > 1.0)) {
        throw ConfigError("xi must exceed 1 somewhere for a bounded domain box");
    }
    const double zmax = (Interval(1.0) / (Interval(par.xi.hi()) - Interval(1.0))).lo();
    return {Interval(lo, hi), Interval(-1.0, 1.0), Interval(-zmax, zmax)};
}

Model make_model(const HenonParams& par, const TubeSettings& s)
{
    if (!(s.eps_y > 0.0) || !(s.eps_z > 0.0)) {
        throw ConfigError("tube sizes must be positive");
    }
    if (!(s.n > s.k && s.k > 1)) {
        throw ConfigError("splitting needs n > k > 1 (got n=" + std::to_string(s.n) + ", k=" + std::to_string(s.k) + ")");
    }
    if (s.nodes < 2) {
        throw ConfigError("collocation needs at least 2 nodes");
    }
    if (par.xi.lo() < 1.0) {
        throw ConfigError("xi interval must lie in [1, inf)");
    }
    if (par.a.contains_zero()) {
        throw ConfigError("parameter a must be bounded away from zero");
    }
    if (!(s.t_margin >= 0.0)) {
        throw ConfigError("T margin must be non-negative");
    }
    Model m;
    m.par = par;
    m.box = make_domain_box(par, s.eps_y);
    m.tube.eps_y = s.eps_y;
    m.tube.eps_z = s.eps_z;
    m.tube.n = s.n;
    m.tube.k = s.k;
    m.tube.nodes = s.nodes;
    m.tube.y0 = s.y0;
    m.tube.t_margin = s.t_margin;
    m.tube.domain_check = s.domain_check;
    m.tube.delta = delta(s.k, s.n, m.box.I.width());
    m.tube.eps_z_hat = (Interval(m.tube.delta) * Interval(s.eps_z)).lo();
    if (!(m.tube.eps_z_hat > 0.0)) {
        throw ConfigError("derived eps_z_hat is not positive");
    }
    return m;
}

void validate(const Model& m)
{
    const auto& t = m.tube;
    if (!(t.eps_y > 0.0) || !(t.eps_z > 0.0) || !(t.eps_z_hat > 0.0)) {
        throw ConfigError("tube sizes must be positive");
    }
    if (!(t.n > t.k && t.k > 1)) {
        throw ConfigError("splitting needs n > k > 1");
    }
    if (t.nodes < 2) {
        throw ConfigError("collocation needs at least 2 nodes");
    }
    if (m.par.xi.lo() < 1.0 || m.par.a.contains_zero()) {
        throw ConfigError("parameters outside the supported range");
    }
    const DomainBox ref = make_domain_box(m.par, t.eps_y);
    if (!m.box.I.subset(ref.I) || !(m.box.I.lo() < m.box.I.hi())) {
        throw ConfigError("stored I is not inside [-1 + b eps_y, 1 - b eps_y]");
    }
    if (!m.box.y_range.subset(ref.y_range) || !m.box.z_range.subset(ref.z_range)) {
        throw ConfigError("stored domain box exceeds D");
    }
    const double d = delta(t.k, t.n, m.box.I.width());
    if (!(t.delta <= d)) {
        throw ConfigError("stored delta exceeds 2(n-k)/((n-1)|I|)");
    }
    if (!(t.eps_z_hat <= (Interval(d) * Interval(t.eps_z)).lo())) {
        throw ConfigError("stored eps_z_hat exceeds delta * eps_z");
    }
}

UCurve initial_curve(const TubeConfig& cfg)
{
    return {RPoly::constant(Interval(cfg.y0)), RPoly::constant(Interval())};
}

std::vector<Interval> split_offsets(const TubeConfig& cfg)
{
    std::vector<Interval> off;
    off.reserve(static_cast<std::size_t>(cfg.n));
    const Interval span = Interval(cfg.eps_z) * Interval(static_cast<double>(cfg.k - 1));
    const Interval denom(static_cast<double>(cfg.n - 1));
    for (int i = 0; i < cfg.n; ++i) {
        // span * (2i / (n - 1) - 1)
        const Interval frac = Interval(2.0 * i) / denom - Interval(1.0);
        off.push_back(span * frac);
    }
    return off;
}

UCurve split_slot(const UCurve& beta, const TubeConfig& cfg, int slot)
{
    const auto off = split_offsets(cfg);
    UCurve a = beta;
    a.pz += off.at(static_cast<std::size_t>(slot));
    return a;
}

std::vector<UCurve> split(const UCurve& beta, const TubeConfig& cfg)
{
    std::vector<UCurve> out;
    out.reserve(static_cast<std::size_t>(cfg.n));
    for (const Interval& o : split_offsets(cfg)) {
        UCurve a = beta;
        a.pz += o;
        out.push_back(std::move(a));
    }
    return out;
}

bool curve_in_domain(const UCurve& alpha, const Model& m)
{
    const Interval I = m.box.I;
    return eval_enclosure(alpha.py, I).subset(m.box.y_range) && eval_enclosure(alpha.pz, I).subset(m.box.z_range);
}

bool admissible(const UCurve& alpha, const Model& m)
{
    return m.tube.domain_check == DomainCheck::tube ? big_tube_in_domain(alpha, m) : curve_in_domain(alpha, m);
}

bool big_tube_in_domain(const UCurve& alpha, const Model& m)
{
    const Interval I = m.box.I;
    const Interval ey = Interval::symmetric(m.tube.eps_y);
    const Interval ez = Interval(static_cast<double>(m.tube.k)) * Interval::symmetric(m.tube.eps_z);
    const Interval y = eval_enclosure(alpha.py, I) + ey;
    const Interval z = eval_enclosure(alpha.pz, I) + ez;
    return y.subset(m.box.y_range) && z.subset(m.box.z_range);
}

RPoly xhat(const UCurve& alpha, const HenonParams& par)
{
    RPoly r = par.b * alpha.py;
    std::vector<Interval> c = r.coeffs();
    if (c.size() < 3) {
        c.resize(3);
    }
    c[0] += par.c;
    c[2] += par.a;
    return RPoly(std::move(c), alpha.py.domain());
}

std::pair<RPoly, RPoly> residuals(const UCurve& alpha, const UCurve& beta, const HenonParams& par)
{
    const RPoly xh = xhat(alpha, par);
    const RPoly id = RPoly::identity(alpha.py.domain());
    RPoly ry = id - compose(beta.py, xh);
    RPoly rz = par.xi * alpha.pz + id - compose(beta.pz, xh);
    return {std::move(ry), std::move(rz)};
}

Matrix3 jacobian_enclosure(const UCurve& alpha, const UCurve& beta, const HenonParams& par, Interval T,
                           const TubeConfig& cfg)
{
    const RPoly dxh = xhat(alpha, par).derivative();
    const auto [ry, rz] = residuals(alpha, beta, par);
    const RPoly dqy = beta.py.derivative();
    const RPoly dqz = beta.pz.derivative();

    const Interval bey = Interval(par.b.mag()) * Interval(cfg.eps_y);
    // |qy'(xhat + b y) - qy'(xhat)| <= |qy''| |b y|; both arguments lie in [-1, 1].
    const Interval shift_y = Interval::symmetric((Interval(sup_norm(dqy.derivative(), kUnitInterval)) * bey).hi());
    const Interval shift_z = Interval::symmetric((Interval(sup_norm(dqz.derivative(), kUnitInterval)) * bey).hi());

    const Interval j11 = eval_enclosure(dxh, T);
    Matrix3 J;
    J[0] = {j11, par.b, Interval()};
    J[1] = {eval_enclosure(ry.derivative(), T) + j11 * shift_y, -par.b * eval_enclosure(dqy, kUnitInterval),
            Interval()};
    J[2] = {eval_enclosure(rz.derivative(), T) + j11 * shift_z, -par.b * eval_enclosure(dqz, kUnitInterval),
            par.xi};
    return J;
}

ConeImage cone_image(const Matrix3& J, const TubeConfig& cfg)
{
    const Interval vy = Interval::symmetric(cfg.eps_y);
    const Interval vz = Interval::symmetric(cfg.eps_z_hat);
    auto row = [&](int r) { return J[r][0] + J[r][1] * vy + J[r][2] * vz; };
    return {row(0), row(1), row(2)};
}

std::array<double, 3> henon_map(const HenonParams& par, const std::array<double, 3>& p)
{
    const auto [x, y, z] = p;
    return {par.a.mid() * x * x + par.b.mid() * y + par.c.mid(), x, par.xi.mid() * z + x};
}

std::array<double, 3> fab_point(const UCurve& alpha, const UCurve& beta, const HenonParams& par,
                                const std::array<double, 3>& p)
{
    const auto [x, y, z] = p;
    const double xh = par.a.mid() * x * x + par.b.mid() * alpha.py.eval_mid(x) + par.c.mid();
    const double u = xh + par.b.mid() * y;
    return {u, x - beta.py.eval_mid(u), par.xi.mid() * (z + alpha.pz.eval_mid(x)) + x - beta.pz.eval_mid(u)};
}

} // namespace blender
