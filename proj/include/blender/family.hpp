#ifndef BLENDER_FAMILY_HPP
#define BLENDER_FAMILY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "blender/throughbox.hpp"

namespace blender {

// Small tube split(curves[parent])[slot] maps through the big tube around
// curves[target] via the box T x eps_y x eps_z.
struct MapRecord {
    std::size_t parent = 0;
    int slot = 0;
    std::size_t target = 0;
    Interval T;

    friend bool operator==(const MapRecord&, const MapRecord&) = default;
};

struct Certificate {
    Model model;
    std::vector<UCurve> curves; // index 0 is the seed curve
    std::vector<MapRecord> maps; // n per curve, ordered by (parent, slot)
};

// Hash grid over the cross-section {x = 0}; a curve is filed under the cell
// containing (qy(0), qz(0)).
class GridIndex
{
public:
    using Cell = std::pair<std::int64_t, std::int64_t>;

    GridIndex(double dy, double dz, double y_origin, double z_origin);

    Cell cell_of(double y, double z) const;
    void insert(std::size_t curve, double y, double z);
    // Curves in the cell of (y, z) and its 8 neighbours, in ascending index order.
    std::vector<std::size_t> neighbourhood(double y, double z) const;
    std::size_t size() const noexcept { return count_; }
    double dy() const noexcept { return dy_; }
    double dz() const noexcept { return dz_; }

private:
    struct CellHash {
        std::size_t operator()(const Cell& c) const noexcept
        {
            return std::hash<std::int64_t>{}(c.first * 0x9E3779B97F4A7C15LL) ^ std::hash<std::int64_t>{}(c.second);
        }
    };

    double dy_;
    double dz_;
    double y0_;
    double z0_;
    std::size_t count_ = 0;
    std::unordered_map<Cell, std::vector<std::size_t>, CellHash> cells_;
};

GridIndex make_grid(const Model& m, double dy = 0.0, double dz = 0.0);

// Key point of a curve on {x = 0}.
std::pair<double, double> grid_key(const UCurve& beta);

// Image of a small curve sampled at the collocation abscissae: the chosen T,
// parameters t_i with xhat(t_i) = x_i, and the image coordinates there.
struct ImageSamples {
    ThroughInterval through;
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> z;
    double key_y = 0.0;
    double key_z = 0.0;
};

ImageSamples sample_image(const UCurve& alpha, const Model& m);

// Candidates from the 3x3 cell block around the image's key point whose node
// values are within eps_y (y) and k eps_z (z), nearest first.
std::vector<std::size_t> find_target(const ImageSamples& img, const GridIndex& index,
                                     std::span<const UCurve> curves, const Model& m);
std::vector<std::size_t> find_target(const UCurve& alpha_small, const GridIndex& index,
                                     std::span<const UCurve> curves, const Model& m);

// Collocation target through the image of alpha over its through interval.
UCurve build_target_curve(const ImageSamples& img, const Model& m);
UCurve build_target_curve(const UCurve& alpha, const Model& m);

struct BuildOptions {
    double cell_dy = 0.0; // 0 selects 2 eps_y
    double cell_dz = 0.0; // 0 selects 2 eps_z
    std::size_t max_curves = 5'000'000;
    std::size_t max_rounds = 10'000'000;
    // Called after every queue step with (iteration, |L|, |P|); iteration 0
    // is the initial state.
    std::function<void(std::size_t, std::size_t, std::size_t)> on_step;
};

// Builds the curve family with a FIFO queue. Every accepted record has passed the
// rigorous through-box check with the model's full parameter intervals.
Certificate construct(const Model& m, const BuildOptions& opts = {});

struct RecordFailure {
    std::size_t record = 0;
    BoxVerdict verdict = BoxVerdict::pass;
};

struct VerifyReport {
    bool passed = false;
    std::vector<std::string> problems; // certificate-level failures
    std::vector<RecordFailure> failures; // sorted by record index
    std::size_t records_checked = 0;
};

// Re-checks every record from scratch. Throws FormatError for a structurally
// malformed certificate.
VerifyReport verify(const Certificate& cert);
// Reference implementation, one record at a time.
VerifyReport verify_serial(const Certificate& cert);
// Records checked concurrently with OpenMP; same report as verify_serial.
VerifyReport verify_parallel(const Certificate& cert);

struct SweepRow {
    double xi = 0.0;
    std::size_t count = 0;
    bool terminated = false;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepSettings {
    HenonParams base; // xi is replaced per grid point
    TubeSettings tube;
    BuildOptions build; // on_step is ignored
};

// One construction per grid value of xi (thin interval). With
// rigorous == false every parameter is collapsed to its midpoint.
std::vector<SweepRow> sweep_serial(std::span<const double> xi_grid, const SweepSettings& s, bool rigorous);
std::vector<SweepRow> sweep_parallel(std::span<const double> xi_grid, const SweepSettings& s, bool rigorous);
std::vector<SweepRow> sweep(std::span<const double> xi_grid, const SweepSettings& s, bool rigorous);

} // namespace blender

#endif
