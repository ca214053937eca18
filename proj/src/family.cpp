#include "blender/family.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace blender {

GridIndex::GridIndex(double dy, double dz, double y_origin, double z_origin)
    : dy_(dy), dz_(dz), y0_(y_origin), z0_(z_origin)
{
    if (!(dy > 0.0) || !(dz > 0.0)) {
        throw ConfigError("grid cell sizes must be positive");
    }
}

GridIndex::Cell GridIndex::cell_of(double y, double z) const
{
    return {static_cast<std::int64_t>(std::floor((y - y0_) / dy_)),
            static_cast<std::int64_t>(std::floor((z - z0_) / dz_))};
}

void GridIndex::insert(std::size_t curve, double y, double z)
{
    cells_[cell_of(y, z)].push_back(curve);
    ++count_;
}

std::vector<std::size_t> GridIndex::neighbourhood(double y, double z) const
{
    const Cell c = cell_of(y, z);
    std::vector<std::size_t> out;
    for (std::int64_t i = -1; i <= 1; ++i) {
        for (std::int64_t j = -1; j <= 1; ++j) {
            auto it = cells_.find({c.first + i, c.second + j});
            if (it != cells_.end()) {
                out.insert(out.end(), it->second.begin(), it->second.end());
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GridIndex make_grid(const Model& m, double dy, double dz)
{
    if (dy <= 0.0) {
        dy = 2.0 * m.tube.eps_y;
    }
    if (dz <= 0.0) {
        dz = 2.0 * m.tube.eps_z;
    }
    return GridIndex(dy, dz, m.box.y_range.lo(), m.box.z_range.lo());
}

std::pair<double, double> grid_key(const UCurve& beta) { return {beta.py.eval_mid(0.0), beta.pz.eval_mid(0.0)}; }

ImageSamples sample_image(const UCurve& alpha, const Model& m)
{
    ImageSamples img;
    img.through = compute_T(alpha, m.par, m.tube);
    img.x = chebyshev_nodes(m.tube.degree());
    const RPoly xh = xhat(alpha, m.par);
    const double xi = m.par.xi.mid();
    const double lo = img.through.T.lo(), hi = img.through.T.hi();
    img.t.reserve(img.x.size());
    for (double xv : img.x) {
        double t = 0.0;
        try {
            t = bracketed_root(xh, xv, lo, hi);
        } catch (const RootError& e) {
            throw ConstructionError(std::string("collocation node solve failed: ") + e.what());
        }
        img.t.push_back(t);
        img.y.push_back(t);
        img.z.push_back(xi * alpha.pz.eval_mid(t) + t);
    }
    const double ts = img.through.t_star;
    img.key_y = ts;
    img.key_z = xi * alpha.pz.eval_mid(ts) + ts;
    return img;
}

std::vector<std::size_t> find_target(const ImageSamples& img, const GridIndex& index, std::span<const UCurve> curves,
                                     const Model& m)
{
    const double ey = m.tube.eps_y;
    const double ez = m.tube.k * m.tube.eps_z;
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t c : index.neighbourhood(img.key_y, img.key_z)) {
        const UCurve& beta = curves[c];
        double dist = 0.0;
        for (std::size_t i = 0; i < img.x.size() && dist <= 1.0; ++i) {
            const double dy = std::fabs(img.y[i] - beta.py.eval_mid(img.x[i])) / ey;
            const double dz = std::fabs(img.z[i] - beta.pz.eval_mid(img.x[i])) / ez;
            dist = std::max({dist, dy, dz});
        }
        if (dist <= 1.0) {
            scored.emplace_back(dist, c);
        }
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::size_t> out;
    out.reserve(scored.size());
    for (const auto& s : scored) {
        out.push_back(s.second);
    }
    return out;
}

std::vector<std::size_t> find_target(const UCurve& alpha_small, const GridIndex& index,
                                     std::span<const UCurve> curves, const Model& m)
{
    return find_target(sample_image(alpha_small, m), index, curves, m);
}

UCurve build_target_curve(const ImageSamples& img, const Model& m)
{
    auto [qy, qz] = interpolate_cheb(img.y, img.z, m.tube.degree());
    UCurve beta{std::move(qy), std::move(qz)};
    if (!admissible(beta, m)) {
        throw DomainEscapeError(std::string(m.tube.domain_check == DomainCheck::tube ? "new big tube" : "new curve") +
                                " leaves D (key point y=" + std::to_string(img.key_y) +
                                ", z=" + std::to_string(img.key_z) + ")");
    }
    return beta;
}

UCurve build_target_curve(const UCurve& alpha, const Model& m) { return build_target_curve(sample_image(alpha, m), m); }

Certificate construct(const Model& m, const BuildOptions& opts)
{
    validate(m);
    Certificate cert;
    cert.model = m;

    GridIndex grid = make_grid(m, opts.cell_dy, opts.cell_dz);
    std::vector<PreparedTarget> prepared;
    std::vector<std::pair<std::size_t, std::size_t>> history;
    std::deque<std::size_t> pending;

    auto add_curve = [&](UCurve beta, PreparedTarget prep) {
        const auto [ky, kz] = grid_key(beta);
        const std::size_t idx = cert.curves.size();
        grid.insert(idx, ky, kz);
        cert.curves.push_back(std::move(beta));
        prepared.push_back(std::move(prep));
        pending.push_back(idx);
        return idx;
    };

    {
        UCurve seed = initial_curve(m.tube);
        PreparedTarget prep = prepare_target(seed, m);
        if (!prep.in_domain) {
            throw DomainEscapeError("seed curve leaves D");
        }
        add_curve(std::move(seed), std::move(prep));
    }
    history.emplace_back(cert.curves.size(), pending.size());
    if (opts.on_step) {
        opts.on_step(0, cert.curves.size(), pending.size());
    }

    std::size_t rounds = 0;
    while (!pending.empty()) {
        if (++rounds > opts.max_rounds) {
            throw NonTerminationError("queue round limit reached with |L| = " + std::to_string(cert.curves.size()),
                                      std::move(history));
        }
        const std::size_t parent = pending.front();
        const auto slots = split(cert.curves[parent], m.tube);
        for (int slot = 0; slot < m.tube.n; ++slot) {
            const UCurve& alpha = slots[static_cast<std::size_t>(slot)];
            const ImageSamples img = sample_image(alpha, m);
            const Interval T = img.through.T;

            std::size_t chosen = cert.curves.size();
            for (std::size_t c : find_target(img, grid, cert.curves, m)) {
                if (check_through_box(alpha, prepared[c], m, T) == BoxVerdict::pass) {
                    chosen = c;
                    break;
                }
            }
            if (chosen == cert.curves.size()) {
                if (cert.curves.size() >= opts.max_curves) {
                    throw NonTerminationError("curve limit " + std::to_string(opts.max_curves) + " reached",
                                              std::move(history));
                }
                UCurve beta = build_target_curve(img, m);
                PreparedTarget prep = prepare_target(beta, m);
                const BoxVerdict v = check_through_box(alpha, prep, m, T);
                if (v != BoxVerdict::pass) {
                    throw ConstructionError("curve " + std::to_string(parent) + " slot " + std::to_string(slot) +
                                            " does not map through its own collocation target: " +
                                            std::string(to_string(v)));
                }
                chosen = add_curve(std::move(beta), std::move(prep));
            }
            cert.maps.push_back({parent, slot, chosen, T});
        }
        pending.pop_front();
        history.emplace_back(cert.curves.size(), pending.size());
        if (opts.on_step) {
            opts.on_step(rounds, cert.curves.size(), pending.size());
        }
    }
    return cert;
}

namespace {

void check_structure(const Certificate& cert)
{
    const auto n = static_cast<std::size_t>(cert.model.tube.n);
    if (n == 0 || cert.maps.size() != n * cert.curves.size()) {
        throw FormatError("expected " + std::to_string(n * cert.curves.size()) + " map records, found " +
                          std::to_string(cert.maps.size()));
    }
    for (std::size_t i = 0; i < cert.maps.size(); ++i) {
        const MapRecord& r = cert.maps[i];
        if (r.parent != i / n || static_cast<std::size_t>(r.slot) != i % n) {
            throw FormatError("map record " + std::to_string(i) + " is out of (parent, slot) order");
        }
        if (r.target >= cert.curves.size()) {
            throw FormatError("map record " + std::to_string(i) + " targets missing curve " +
                              std::to_string(r.target));
        }
    }
}

// Shared prefix of both verifiers; returns false if record checks are moot.
bool verify_model(const Certificate& cert, VerifyReport& report)
{
    check_structure(cert);
    try {
        validate(cert.model);
    } catch (const ConfigError& e) {
        report.problems.emplace_back(std::string("parameters: ") + e.what());
        return false;
    }
    if (cert.curves.empty()) {
        report.problems.emplace_back("curve list is empty");
        return false;
    }
    return true;
}

void collect_domain_problems(const std::vector<PreparedTarget>& prepared, VerifyReport& report)
{
    for (std::size_t j = 0; j < prepared.size(); ++j) {
        if (!prepared[j].in_domain) {
            report.problems.push_back("curve " + std::to_string(j) + ": leaves D");
        }
    }
}

BoxVerdict check_record(const Certificate& cert, const std::vector<PreparedTarget>& prepared, std::size_t i)
{
    const MapRecord& r = cert.maps[i];
    const UCurve alpha = split_slot(cert.curves[r.parent], cert.model.tube, r.slot);
    return check_through_box(alpha, prepared[r.target], cert.model, r.T);
}

void finish(VerifyReport& report, const std::vector<BoxVerdict>& verdicts)
{
    report.records_checked = verdicts.size();
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i] != BoxVerdict::pass) {
            report.failures.push_back({i, verdicts[i]});
        }
    }
    report.passed = report.problems.empty() && report.failures.empty();
}

} // namespace

VerifyReport verify_serial(const Certificate& cert)
{
    VerifyReport report;
    if (!verify_model(cert, report)) {
        return report;
    }
    std::vector<PreparedTarget> prepared;
    prepared.reserve(cert.curves.size());
    for (const UCurve& c : cert.curves) {
        prepared.push_back(prepare_target(c, cert.model));
    }
    collect_domain_problems(prepared, report);
    std::vector<BoxVerdict> verdicts(cert.maps.size());
    for (std::size_t i = 0; i < cert.maps.size(); ++i) {
        verdicts[i] = check_record(cert, prepared, i);
    }
    finish(report, verdicts);
    return report;
}

VerifyReport verify_parallel(const Certificate& cert)
{
    VerifyReport report;
    if (!verify_model(cert, report)) {
        return report;
    }
    const auto ncurves = static_cast<std::int64_t>(cert.curves.size());
    std::vector<PreparedTarget> prepared(cert.curves.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t j = 0; j < ncurves; ++j) {
        prepared[static_cast<std::size_t>(j)] = prepare_target(cert.curves[static_cast<std::size_t>(j)], cert.model);
    }
    collect_domain_problems(prepared, report);

    const auto nrec = static_cast<std::int64_t>(cert.maps.size());
    std::vector<BoxVerdict> verdicts(cert.maps.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < nrec; ++i) {
        verdicts[static_cast<std::size_t>(i)] = check_record(cert, prepared, static_cast<std::size_t>(i));
    }
    finish(report, verdicts);
    return report;
}

VerifyReport verify(const Certificate& cert) { return verify_parallel(cert); }

namespace {

SweepRow sweep_point(double xi, const SweepSettings& s, bool rigorous)
{
    SweepRow row{xi, 0, false};
    HenonParams par = s.base;
    par.xi = Interval(xi);
    if (!rigorous) {
        par = par.midpoint();
    }
    BuildOptions opts = s.build;
    std::size_t last_count = 0;
    opts.on_step = [&](std::size_t, std::size_t L, std::size_t) { last_count = L; };
    try {
        const Certificate cert = construct(make_model(par, s.tube), opts);
        row.count = cert.curves.size();
        row.terminated = true;
    } catch (const BlenderError&) {
        row.count = last_count;
    }
    return row;
}

} // namespace

std::vector<SweepRow> sweep_serial(std::span<const double> xi_grid, const SweepSettings& s, bool rigorous)
{
    std::vector<SweepRow> rows;
    rows.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        rows.push_back(sweep_point(xi, s, rigorous));
    }
    return rows;
}

std::vector<SweepRow> sweep_parallel(std::span<const double> xi_grid, const SweepSettings& s, bool rigorous)
{
    std::vector<SweepRow> rows(xi_grid.size());
    const auto npts = static_cast<std::int64_t>(xi_grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < npts; ++i) {
        rows[static_cast<std::size_t>(i)] = sweep_point(xi_grid[static_cast<std::size_t>(i)], s, rigorous);
    }
    return rows;
}

std::vector<SweepRow> sweep(std::span<const double> xi_grid, const SweepSettings& s, bool rigorous)
{
    return sweep_parallel(xi_grid, s, rigorous);
}

} // namespace blender
