#ifndef BLENDER_THROUGHBOX_HPP
#define BLENDER_THROUGHBOX_HPP

#include <string_view>

#include "blender/model.hpp"

namespace blender {

enum class Orientation { increasing, decreasing };

// Minimal interval T on one monotone branch of xhat, with the branch's
// crossing t* of {xhat = 0}.
struct ThroughInterval {
    Interval T;
    Orientation orientation = Orientation::increasing;
    double t_star = 0.0;
};

// Non-rigorous. Endpoints solve xhat(t) = -+(1 + b eps_y + T_margin) on the
// midpoint selection; of the covering branches the one whose crossing has the
// smallest |xi pz(t*) + t*| is chosen, ties going to t* > 0.
// Throws CoverageError if no branch stretches across.
ThroughInterval compute_T(const UCurve& alpha, const HenonParams& par, const TubeConfig& cfg);

// Per-target data reused across every check against the same big tube.
struct PreparedTarget {
    UCurve curve;
    RPoly dqy;
    RPoly dqz;
    double norm_dqy = 0.0;  // sup |qy'| on [-1, 1]
    double norm_dqz = 0.0;
    double norm_d2qy = 0.0; // sup |qy''| on [-1, 1]
    double norm_d2qz = 0.0;
    Interval range_dqy;
    Interval range_dqz;
    bool in_domain = false;
};

PreparedTarget prepare_target(const UCurve& beta, const Model& m);

enum class BoxVerdict {
    pass,
    t_not_in_I,
    target_outside_D,
    cond1,
    cond2_y,
    cond2_z,
    cond3_lx,
    cond3_y,
    cond3_z,
};

std::string_view to_string(BoxVerdict v);

// Full through-box check: T in int(I), the target admissible in D, then the
// stretching, containment and cone conditions. Pure.
BoxVerdict check_through_box(const UCurve& alpha, const PreparedTarget& beta, const Model& m, Interval T);

bool check_cond1(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T);
bool check_cond2(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T);
bool check_cond3(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T);
bool is_through_box(const UCurve& alpha, const UCurve& beta, const Model& m, Interval T);

} // namespace blender

#endif
