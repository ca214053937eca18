// blendercert: construct, verify, sweep and export u-curve certificates.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "blender/certstore.hpp"
#include "blender/family.hpp"

using namespace blender;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 2;
constexpr int kExitConfig = 3;

struct MapFlags {
    std::string a = "4";
    std::string b = "0.3";
    std::string c = "-2.375";
    std::string xi_lo = "1";
    std::string xi_hi = "1.1";
};

void add_map_flags(CLI::App* cmd, MapFlags& f, bool with_xi)
{
    cmd->add_option("--a", f.a, "quadratic coefficient a")->capture_default_str();
    cmd->add_option("--b", f.b, "coupling b")->capture_default_str();
    cmd->add_option("--c", f.c, "constant c")->capture_default_str();
    if (with_xi) {
        cmd->add_option("--xi-lo", f.xi_lo, "lower end of the xi interval")->capture_default_str();
        cmd->add_option("--xi-hi", f.xi_hi, "upper end of the xi interval")->capture_default_str();
    }
}

void add_tube_flags(CLI::App* cmd, TubeSettings& t, std::string& domain)
{
    cmd->add_option("--eps-y", t.eps_y, "y value and slope bound")->capture_default_str();
    cmd->add_option("--eps-z", t.eps_z, "small tube z value bound")->capture_default_str();
    cmd->add_option("--n", t.n, "small tubes per big tube")->capture_default_str();
    cmd->add_option("--k", t.k, "big/small tube z ratio")->capture_default_str();
    cmd->add_option("--nodes", t.nodes, "collocation nodes")->capture_default_str();
    cmd->add_option("--y0", t.y0, "seed curve height")->capture_default_str();
    cmd->add_option("--t-margin", t.t_margin, "extra stretch demanded of T")->capture_default_str();
    cmd->add_option("--domain-check", domain, "what must stay in D: curve or tube")
        ->check(CLI::IsMember({"curve", "tube"}))
        ->capture_default_str();
}

DomainCheck parse_domain(const std::string& s) { return s == "tube" ? DomainCheck::tube : DomainCheck::curve; }

HenonParams parse_params(const MapFlags& f)
{
    HenonParams p;
    p.a = Interval::enclose(f.a);
    p.b = Interval::enclose(f.b);
    p.c = Interval::enclose(f.c);
    p.xi = Interval(Interval::enclose(f.xi_lo).lo(), Interval::enclose(f.xi_hi).hi());
    return p;
}

std::size_t max_curves_from_env(std::size_t fallback)
{
    const char* env = std::getenv("BLENDER_MAX_CURVES");
    if (env == nullptr || *env == '\0') {
        return fallback;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) {
        throw ConfigError(std::string("BLENDER_MAX_CURVES must be a positive integer, got '") + env + "'");
    }
    return static_cast<std::size_t>(v);
}

// out.txt -> out.3.txt
fs::path numbered(const fs::path& p, std::size_t i)
{
    fs::path r = p.parent_path() / p.stem();
    r += "." + std::to_string(i);
    r += p.extension();
    return r;
}

// Subinterval i of m; consecutive pieces overlap by rounding so their union
// covers xi.
Interval subinterval(Interval xi, std::size_t i, std::size_t m)
{
    if (m == 1) {
        return xi;
    }
    const Interval lo(xi.lo()), len = Interval(xi.hi()) - lo;
    const Interval e0 = lo + len * Interval(static_cast<double>(i)) / Interval(static_cast<double>(m));
    const Interval e1 = lo + len * Interval(static_cast<double>(i + 1)) / Interval(static_cast<double>(m));
    const double a = i == 0 ? xi.lo() : e0.lo();
    const double b = i + 1 == m ? xi.hi() : e1.hi();
    return Interval(a, b);
}

int cmd_construct(const MapFlags& mf, TubeSettings ts, const std::string& domain, std::size_t subintervals,
                  const fs::path& out, const std::string& log_lp, std::size_t max_curves)
{
    ts.domain_check = parse_domain(domain);
    const HenonParams base = parse_params(mf);
    if (subintervals == 0) {
        throw ConfigError("--subintervals must be at least 1");
    }
    BuildOptions opts;
    opts.max_curves = max_curves_from_env(max_curves);

    // validate every piece before spending time on any of them
    std::vector<Model> models;
    for (std::size_t i = 0; i < subintervals; ++i) {
        HenonParams p = base;
        p.xi = subinterval(base.xi, i, subintervals);
        models.push_back(make_model(p, ts));
    }

    std::size_t max_count = 0;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const fs::path path = subintervals > 1 ? numbered(out, i) : out;
        std::ofstream log;
        if (!log_lp.empty()) {
            const fs::path lp = subintervals > 1 ? numbered(log_lp, i) : fs::path(log_lp);
            log.open(lp);
            if (!log) {
                throw ConfigError("cannot open " + lp.string());
            }
            log << "iteration,L,P\n";
            opts.on_step = [&log](std::size_t it, std::size_t L, std::size_t P) {
                log << it << ',' << L << ',' << P << '\n';
            };
        }
        const Interval xi = models[i].par.xi;
        Certificate cert;
        try {
            cert = construct(models[i], opts);
        } catch (const NonTerminationError& e) {
            std::fprintf(stderr, "xi [%.17g, %.17g]: no termination: %s\n", xi.lo(), xi.hi(), e.what());
            if (!e.history().empty()) {
                std::fprintf(stderr, "  last |L| = %zu, |P| = %zu\n", e.history().back().first,
                             e.history().back().second);
            }
            return kExitFail;
        } catch (const ConfigError&) {
            throw;
        } catch (const BlenderError& e) {
            std::fprintf(stderr, "xi [%.17g, %.17g]: construction failed: %s\n", xi.lo(), xi.hi(), e.what());
            return kExitFail;
        }
        const VerifyReport rep = verify(cert);
        if (!rep.passed) {
            std::fprintf(stderr, "xi [%.17g, %.17g]: self-verification failed (%zu records)\n", xi.lo(), xi.hi(),
                         rep.failures.size());
            return kExitFail;
        }
        save(cert, path);
        max_count = std::max(max_count, cert.curves.size());
        std::printf("xi [%.17g, %.17g]: %zu curves, %zu records, verified -> %s\n", xi.lo(), xi.hi(),
                    cert.curves.size(), cert.maps.size(), path.string().c_str());
    }
    if (subintervals > 1) {
        std::printf("max curves over %zu subintervals: %zu\n", subintervals, max_count);
    }
    return kExitOk;
}

int cmd_verify(const fs::path& path, bool serial)
{
    Certificate cert;
    try {
        cert = load(path);
    } catch (const FormatError& e) {
        std::fprintf(stderr, "%s: %s\n", path.string().c_str(), e.what());
        return kExitConfig;
    }
    VerifyReport rep;
    try {
        rep = serial ? verify_serial(cert) : verify_parallel(cert);
    } catch (const FormatError& e) {
        std::fprintf(stderr, "%s: %s\n", path.string().c_str(), e.what());
        return kExitConfig;
    }
    for (const std::string& p : rep.problems) {
        std::printf("problem: %s\n", p.c_str());
    }
    const auto n = static_cast<std::size_t>(cert.model.tube.n);
    for (const RecordFailure& f : rep.failures) {
        const MapRecord& r = cert.maps[f.record];
        std::printf("record %zu (curve %zu slot %d -> curve %zu): %s\n", f.record, f.record / n, r.slot, r.target,
                    std::string(to_string(f.verdict)).c_str());
    }
    std::printf("%s: %zu curves, %zu/%zu records pass\n", rep.passed ? "PASS" : "FAIL", cert.curves.size(),
                rep.records_checked - rep.failures.size(), rep.records_checked);
    return rep.passed ? kExitOk : kExitFail;
}

int cmd_sweep(const MapFlags& mf, TubeSettings ts, const std::string& domain, std::vector<double> xis, double from,
              double to, double step, bool rigorous, const std::string& out)
{
    ts.domain_check = parse_domain(domain);
    if (xis.empty()) {
        if (!(step > 0.0) || !(to >= from)) {
            throw ConfigError("sweep needs --xi values or --xi-from <= --xi-to with --xi-step > 0");
        }
        const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            xis.push_back(from + static_cast<double>(i) * step);
        }
    }
    for (double x : xis) {
        if (!(x >= 1.0)) {
            throw ConfigError("sweep values of xi must be >= 1");
        }
    }
    SweepSettings s;
    s.base = parse_params(mf);
    s.tube = ts;
    s.build.max_curves = max_curves_from_env(s.build.max_curves);
    // fail fast on settings that no grid point could accept
    make_model(HenonParams{s.base.a, s.base.b, s.base.c, Interval(xis.front())}, ts);

    const auto rows = sweep(xis, s, rigorous);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file.open(out);
        if (!file) {
            throw ConfigError("cannot open " + out);
        }
        os = &file;
    }
    *os << "xi,count,terminated\n";
    char buf[64];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g", r.xi);
        *os << buf << ',' << r.count << ',' << (r.terminated ? 1 : 0) << '\n';
    }
    return kExitOk;
}

int cmd_export(const fs::path& path, const std::string& plane, std::size_t samples, const std::string& out)
{
    Certificate cert;
    try {
        cert = load(path);
    } catch (const FormatError& e) {
        std::fprintf(stderr, "%s: %s\n", path.string().c_str(), e.what());
        return kExitConfig;
    }
    if (samples < 2) {
        throw ConfigError("--samples must be at least 2");
    }
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file.open(out);
        if (!file) {
            throw ConfigError("cannot open " + out);
        }
        os = &file;
    }
    const bool xz = plane == "xz";
    *os << (xz ? "curve,x,z\n" : "curve,x,y\n");
    const Interval I = cert.model.box.I;
    char buf[128];
    for (std::size_t c = 0; c < cert.curves.size(); ++c) {
        const RPoly& p = xz ? cert.curves[c].pz : cert.curves[c].py;
        for (std::size_t j = 0; j < samples; ++j) {
            const double x = I.lo() + (I.hi() - I.lo()) * static_cast<double>(j) / static_cast<double>(samples - 1);
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", c, x, p.eval_mid(x));
            *os << buf;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Construct and check u-curve certificates for the Henon-like blender family"};
    app.require_subcommand(1);

    MapFlags mf;
    TubeSettings ts;
    std::string domain = "curve";
    std::size_t subintervals = 1;
    std::string out = "cert.txt";
    std::string log_lp;
    std::size_t max_curves = BuildOptions{}.max_curves;
    auto* construct_cmd = app.add_subcommand("construct", "build a certificate (one per xi subinterval)");
    add_map_flags(construct_cmd, mf, true);
    add_tube_flags(construct_cmd, ts, domain);
    construct_cmd->add_option("--subintervals", subintervals, "equal pieces of the xi interval")->capture_default_str();
    construct_cmd->add_option("--out", out, "certificate path (name.i.ext per piece)")->capture_default_str();
    construct_cmd->add_option("--log-lp", log_lp, "CSV log of |L| and |P| per iteration");
    construct_cmd->add_option("--max-curves", max_curves, "curve count guard")->capture_default_str();

    std::string cert_path;
    bool serial = false;
    auto* verify_cmd = app.add_subcommand("verify", "re-check a stored certificate");
    verify_cmd->add_option("certificate", cert_path, "certificate file")->required();
    verify_cmd->add_flag("--serial", serial, "check records one at a time");

    MapFlags smf;
    TubeSettings sts;
    sts.eps_z = 0.1;
    sts.n = 5;
    sts.nodes = 5;
    std::string sdomain = "curve";
    std::vector<double> xis;
    double from = 1.1, to = 1.6, step = 0.1;
    bool rigorous = false;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "curve counts over a grid of point values of xi");
    add_map_flags(sweep_cmd, smf, false);
    add_tube_flags(sweep_cmd, sts, sdomain);
    sweep_cmd->add_option("--xi", xis, "explicit xi values (space or comma separated)")->delimiter(',');
    sweep_cmd->add_option("--xi-from", from, "first grid value")->capture_default_str();
    sweep_cmd->add_option("--xi-to", to, "last grid value")->capture_default_str();
    sweep_cmd->add_option("--xi-step", step, "grid spacing")->capture_default_str();
    sweep_cmd->add_flag("--rigorous", rigorous, "keep interval parameters instead of midpoints");
    sweep_cmd->add_option("--out", sweep_out, "CSV path (default stdout)");

    std::string export_path, plane = "xz", export_out;
    std::size_t samples = 256;
    auto* export_cmd = app.add_subcommand("export", "sample every curve for plotting");
    export_cmd->add_option("certificate", export_path, "certificate file")->required();
    export_cmd->add_option("--plane", plane, "projection")->check(CLI::IsMember({"xz", "xy"}))->capture_default_str();
    export_cmd->add_option("--samples", samples, "points per curve")->capture_default_str();
    export_cmd->add_option("--out", export_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*construct_cmd) {
            return cmd_construct(mf, ts, domain, subintervals, out, log_lp, max_curves);
        }
        if (*verify_cmd) {
            return cmd_verify(cert_path, serial);
        }
        if (*sweep_cmd) {
            return cmd_sweep(smf, sts, sdomain, xis, from, to, step, rigorous, sweep_out);
        }
        return cmd_export(export_path, plane, samples, export_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const BlenderError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
}
