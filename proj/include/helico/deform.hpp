#pragma once

#include <string>
#include <vector>

#include "helico/helicoid.hpp"
#include "helico/numerics.hpp"

namespace helico {

enum class SpaceProvenance { Parallel, Focal };
enum class FocalBranch { Plus, Minus, Auto };

// Space curve (x1, x2, x3) whose helicoidal sweep about the z-axis gives a
// parallel or focal surface. For x-axis surfaces the curve lives in the
// axis-adapted frame where the x-axis plays the role of z.
struct SpaceProfile {
    Expr x1, x2, x3;
    Expr lambda; // constant for parallel, a function of t for focal
    SpaceProvenance provenance = SpaceProvenance::Parallel;
    FocalBranch branch = FocalBranch::Minus; // resolved branch for focal profiles
    Axis axis = Axis::Z;
    double c = 0.0;
    Interval domain;

    Vec3 at(double t) const;
    // Point of the swept surface in the original coordinates.
    Vec3 surface_point(double t, double theta) const;
};

enum class PlaneConvention { Quadrant, Principal, Lifted };

enum class QuadrantCase { SameSign = 0, OppositeSign = 1, X1Zero = 2, X2Zero = 3, Origin = 4 };

struct PlaneProfile {
    std::vector<double> ts;
    std::vector<Vec2> points;
    // Continuous lift (r, x3 - c * unwrapped angle); equals points up to an
    // isometry on each piece.
    std::vector<Vec2> lift;
    // Quadrant convention: QuadrantCase per sample. Principal convention: the
    // isometry count k relating lift and points.
    std::vector<int> branch;
    PlaneConvention convention = PlaneConvention::Principal;
    std::vector<double> degenerate_ts; // samples on the rotation axis
    Axis axis = Axis::Z;
};

struct PlanePoint {
    Vec2 p;
    QuadrantCase rcase;
};

// Single-point reductions of a space profile point to the xz-plane.
PlanePoint quadrant_point(double x1, double x2, double x3, double c);
Vec2 principal_point(double x1, double x2, double x3, double c);

// Profile of the z-axis helicoid equivalent to H (the swapped profile for x-axis surfaces).
LegendreCurve adapted_profile(const HelicoidalSurface& H);

SpaceProfile parallel_space_profile(const HelicoidalSurface& H, double lambda);
SpaceProfile parallel_space_profile(const LegendreCurve& profile, Axis axis, double lambda, double c);

PlaneProfile space_to_plane(const SpaceProfile& p, int samples = 1001);

// Deformation gamma_{lambda,c}; the slant of H is replaced by c.
PlaneProfile gamma_lambda_c(const HelicoidalSurface& H, double lambda, double c, int samples = 1001);
Vec2 gamma_lambda_c_at(const HelicoidalSurface& H, double lambda, double c, double t);

// Phi(c, t) as an expression in t (index 0) and c (index 1).
Expr phi_expr(const HelicoidalSurface& H, double lambda);
double Phi(const HelicoidalSurface& H, double lambda, double c, double t);

struct ParallelHypotheses {
    bool regular = true;
    bool no_vertex = true;
    bool x_nonzero = true;
    bool not_umbilic = true;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct TrackReport {
    ContinuationResult result;
    std::vector<double> residuals;
    ParallelHypotheses parallel;
    // Focal tracking extras.
    bool ordinary_vertex = true;
    bool kf_nonzero = true;
    bool xbar_nonzero = true;
    double delta1 = 0.0;
    double delta2 = 0.0;
    FocalBranch branch = FocalBranch::Minus;
    std::vector<std::string> violations;
};

TrackReport track_parallel_singularity(const HelicoidalSurface& H, double lambda, double t0,
                                       const std::vector<double>& c_grid, const RootConfig& cfg = {});

struct FocalOptions {
    FocalBranch branch = FocalBranch::Auto;
    bool allow_poles = false; // skip the K_F check so sheets through infinity can be sampled
};

// Stable focal roots: minus = J/(H + sqrt(D)), plus = J/(H - sqrt(D)), D = H^2 - JK.
Expr focal_lambda_expr(const HelicoidForms& f, FocalBranch branch);

SpaceProfile focal_space_profile(const HelicoidalSurface& H, const FocalOptions& opts = {});

struct DeltaOptions {
    int samples = 1001;
    bool split_at_axis = false; // principal pieces with isometry counts instead of an error
    bool on_axis = false;       // accept profiles lying on the axis (quadrant convention)
};

PlaneProfile delta_c(const HelicoidalSurface& H, const FocalOptions& focal = {}, const DeltaOptions& opts = {});

TrackReport track_focal_singularity(const HelicoidalSurface& H, double t0, const std::vector<double>& c_grid,
                                    const RootConfig& cfg = {});

// Symbolic continuous lift (r, x3 - c * atan2(x2, x1)) of a space profile.
std::pair<Expr, Expr> lifted_plane_exprs(const SpaceProfile& p);

// Speed zeros where the unit tangent reverses (dot product < -0.9).
std::vector<double> find_cusps(const Expr& X, const Expr& Z, const Interval& domain, int samples = 4001);

} // namespace helico
