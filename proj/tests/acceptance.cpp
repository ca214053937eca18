// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "properties.hpp"

using namespace blender;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Same subdivision as the command line tool.
Interval subinterval(Interval xi, std::size_t i, std::size_t m)
{
    const Interval lo(xi.lo()), len = Interval(xi.hi()) - lo;
    const Interval e0 = lo + len * Interval(static_cast<double>(i)) / Interval(static_cast<double>(m));
    const Interval e1 = lo + len * Interval(static_cast<double>(i + 1)) / Interval(static_cast<double>(m));
    return Interval(i == 0 ? xi.lo() : e0.lo(), i + 1 == m ? xi.hi() : e1.hi());
}

HenonParams params(const char* lo, const char* hi)
{
    return {Interval(4.0), Interval::enclose("0.3"), Interval::enclose("-2.375"),
            Interval(Interval::enclose(lo).lo(), Interval::enclose(hi).hi())};
}

struct Result {
    bool pass = false;
    std::string detail;
};

Result coarse_ranges()
{
    struct Row {
        const char *lo, *hi;
        double eps_z;
    };
    Result r{true, ""};
    for (Row row : {Row{"1", "1.1", 1.1}, Row{"1.1", "1.2", 0.8}, Row{"1.2", "1.3", 0.5}}) {
        TubeSettings s;
        s.eps_y = 0.02;
        s.eps_z = row.eps_z;
        s.nodes = 3;
        s.n = 3;
        s.k = 2;
        const auto t0 = Clock::now();
        std::size_t count = 0;
        bool ok = false;
        try {
            const Certificate c = construct(make_model(params(row.lo, row.hi), s));
            count = c.curves.size();
            ok = verify(c).passed;
        } catch (const BlenderError& e) {
            r.detail += std::string(" error: ") + e.what();
        }
        const double dt = seconds_since(t0);
        const bool pass = ok && count >= 4 && count <= 32 && dt < 5.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, " [%s,%s]: %zu curves, %s, %.3f s;", row.lo, row.hi, count,
                      ok ? "verified" : "not verified", dt);
        r.detail += buf;
        r.pass = r.pass && pass;
    }
    return r;
}

// Max curve count over m subintervals, each constructed and verified.
Result subdivided(const char* lo, const char* hi, std::size_t m, const TubeSettings& s, std::size_t bound,
                  double budget)
{
    const auto t0 = Clock::now();
    const HenonParams base = params(lo, hi);
    std::size_t max_count = 0;
    bool ok = true;
    std::string err;
    for (std::size_t i = 0; i < m && ok; ++i) {
        HenonParams p = base;
        p.xi = subinterval(base.xi, i, m);
        try {
            const Certificate c = construct(make_model(p, s));
            max_count = std::max(max_count, c.curves.size());
            ok = verify(c).passed;
            if (!ok) {
                err = " piece " + std::to_string(i) + " does not verify";
            }
        } catch (const BlenderError& e) {
            ok = false;
            err = " piece " + std::to_string(i) + ": " + e.what();
        }
    }
    const double dt = seconds_since(t0);
    char buf[200];
    std::snprintf(buf, sizeof buf, " [%s,%s] x%zu: max %zu curves (bound %zu), %.1f s;", lo, hi, m, max_count, bound,
                  dt);
    return {ok && max_count <= bound && dt < budget, buf + err};
}

Result subdivided_ranges()
{
    TubeSettings s;
    s.eps_y = 0.02;
    s.eps_z = 0.1;
    s.nodes = 5;
    s.k = 2;
    s.n = 3;
    const Result a = subdivided("1.4", "1.5", 10, s, 4 * 119, 120.0);
    s.n = 5;
    const Result b = subdivided("1.5", "1.6", 10, s, 4 * 263, 120.0);
    return {a.pass && b.pass, a.detail + b.detail};
}

Result stretch()
{
    TubeSettings s;
    s.eps_y = 0.01;
    s.eps_z = 0.05;
    s.nodes = 5;
    s.n = 5;
    s.k = 2;
    const auto t0 = Clock::now();
    try {
        const Certificate c = construct(make_model(params("1.65", "1.65"), s));
        const bool ok = verify(c).passed;
        const double dt = seconds_since(t0);
        char buf[160];
        std::snprintf(buf, sizeof buf, " xi=1.65: %zu curves, %s, %.1f s", c.curves.size(),
                      ok ? "verified" : "not verified", dt);
        return {ok && c.curves.size() <= 4000 && dt < 600.0, buf};
    } catch (const BlenderError& e) {
        return {false, std::string(" xi=1.65: ") + e.what()};
    }
}

Result negative_control()
{
    const Model m = props::henon_model(1.2, 1.3, 0.02, 0.5, 3, 3);
    const UCurve b1 = initial_curve(m.tube);
    const Interval T = compute_T(b1, m.par, m.tube).T;
    const bool c2 = check_cond2(b1, b1, m, T);
    const bool c3 = check_cond3(b1, b1, m, T);
    const ConeImage L = cone_image(jacobian_enclosure(b1, b1, m.par, T, m.tube), m.tube);
    const Interval r = L.Ly / L.Lx;
    const bool in = r.subset(Interval(0.13 * 0.99, 0.22 * 1.01));
    char buf[200];
    std::snprintf(buf, sizeof buf, " cond2=%d cond3=%d Ly/Lx=[%.6f, %.6f]", c2, c3, r.lo(), r.hi());
    return {!c2 && !c3 && in, buf};
}

Result suites()
{
    Result r{true, ""};
    auto note = [&](const char* name, const props::Outcome& o) {
        char buf[200];
        std::snprintf(buf, sizeof buf, " %s %zu/%zu failed;", name, o.failures, o.trials);
        r.detail += buf;
        if (!o.ok()) {
            r.pass = false;
            if (!o.first.empty()) {
                r.detail += " (" + o.first + ")";
            }
        }
    };
    note("interval", props::interval_soundness(100000));
    note("chebyshev", props::cheb_enclosure(1000, 10000));
    note("split", props::split_coverage(1000));

    // every record of the coarse-range certificates is sampled
    const Certificate c1 = construct(props::henon_model(1.0, 1.1, 0.02, 1.1, 3, 3));
    const Certificate c2 = construct(props::henon_model(1.1, 1.2, 0.02, 0.8, 3, 3));
    const Certificate c3 = construct(props::henon_model(1.2, 1.3, 0.02, 0.5, 3, 3));
    props::Outcome tb;
    for (const Certificate* c : {&c1, &c2, &c3}) {
        const auto o = props::throughbox_soundness(*c, c->maps.size());
        tb.trials += o.trials;
        for (std::size_t i = 0; i < o.failures; ++i) {
            tb.fail(o.first);
        }
    }
    note("through-box", tb);
    note("round-trip", props::certificate_roundtrip(10000));

    // literal 10 eps_y on every coefficient; needs k eps_z <= 10 eps_y
    const Certificate ct = construct(props::henon_model(1.1, 1.2, 0.02, 0.1, 3, 3));
    note("tamper", props::tamper_rejection(ct));
    return r;
}

Result through_interval()
{
    const Model m = props::henon_model(1.2, 1.3, 0.02, 0.5, 3, 3);
    const ThroughInterval ti = compute_T(initial_curve(m.tube), m.par, m.tube);
    const double e0 = std::fabs(ti.T.lo() - std::sqrt(1.369) / 2);
    const double e1 = std::fabs(ti.T.hi() - std::sqrt(3.381) / 2);
    const double es = std::fabs(ti.t_star - 0.7705518);
    char buf[200];
    std::snprintf(buf, sizeof buf, " T=[%.10f, %.10f] errors %.1e %.1e, t*=%.7f", ti.T.lo(), ti.T.hi(), e0, e1,
                  ti.t_star);
    return {e0 < 1e-9 && e1 < 1e-9 && es < 5e-8, buf};
}

Result sweep_shape()
{
    SweepSettings s;
    s.base = props::henon_params(1.0, 1.0);
    s.tube.eps_y = 0.02;
    s.tube.eps_z = 0.1;
    s.tube.n = 5;
    s.tube.k = 2;
    s.tube.nodes = 5;
    const std::vector<double> grid{1.1, 1.2, 1.3, 1.4, 1.5, 1.6};
    const auto t0 = Clock::now();
    const auto rows = sweep(grid, s, false);
    const double dt = seconds_since(t0);
    bool all = true;
    int drops = 0;
    std::string d;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        all = all && rows[i].terminated;
        if (i > 0 && rows[i].count < rows[i - 1].count) {
            ++drops;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, " %.1f:%zu%s", rows[i].xi, rows[i].count, rows[i].terminated ? "" : "!");
        d += buf;
    }
    const double ratio = static_cast<double>(rows[5].count) / static_cast<double>(std::max<std::size_t>(1, rows[1].count));
    char buf[120];
    std::snprintf(buf, sizeof buf, "; ratio(1.6/1.2)=%.2f (need > 10), %.1f s", ratio, dt);
    return {all && drops <= 1 && ratio > 10.0 && dt < 300.0, d + buf};
}

Result growth_log()
{
    TubeSettings s;
    s.eps_y = 0.02;
    s.eps_z = 0.1;
    s.nodes = 5;
    s.n = 5;
    s.k = 2;
    std::vector<std::pair<std::size_t, std::size_t>> log;
    BuildOptions o;
    o.on_step = [&](std::size_t, std::size_t L, std::size_t P) { log.emplace_back(L, P); };
    const Certificate c = construct(make_model(params("1.5", "1.5"), s), o);
    std::size_t peak = 0;
    for (const auto& e : log) {
        peak = std::max(peak, e.second);
    }
    const bool ok = !log.empty() && log.back().second == 0 && log.back().first == c.curves.size() && peak > 1;
    char buf[160];
    std::snprintf(buf, sizeof buf, " %zu iterations, peak |P|=%zu, final |L|=%zu, |P|=%zu, certificate %zu curves",
                  log.size() - 1, peak, log.back().first, log.back().second, c.curves.size());
    return {ok, buf};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"1 coarse xi ranges", coarse_ranges},
        {"2 subdivided xi ranges", subdivided_ranges},
        {"3 stretch point", stretch},
        {"4 negative control", negative_control},
        {"5 property suites", suites},
        {"6 through interval", through_interval},
        {"7 sweep growth", sweep_shape},
        {"8 growth log", growth_log},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Result r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {false, std::string(" unexpected error: ") + e.what()};
        }
        std::printf("%s criterion %s:%s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
