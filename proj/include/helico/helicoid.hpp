#pragma once

#include <array>
#include <optional>
#include <vector>

#include "helico/framed.hpp"
#include "helico/legendre.hpp"

namespace helico {

enum class Axis { X, Z };

enum class SurfaceKind { Helicoidal, Revolution };

// Closed-form quantities of a helicoidal surface as expressions in t (index 0).
// The slant may itself be an expression, e.g. a variable for continuation in c.
struct HelicoidForms {
    Expr xi;
    std::array<Expr, 10> inv; // a1 b1 a2 b2 e1 f1 g1 e2 f2 g2
    Expr J, K, H;
    std::array<Expr, 8> concomitant;
};

HelicoidForms helicoid_forms(const LegendreCurve& profile, Axis axis, const Expr& c);

// Position and frame fields with theta given as an expression.
ExprVec3 helicoid_position(const LegendreCurve& profile, Axis axis, const Expr& c, const Expr& theta);
std::array<ExprVec3, 3> helicoid_frame(const LegendreCurve& profile, Axis axis, const Expr& c, const Expr& theta);

struct Frame {
    Vec3 n, s, t;
};

class HelicoidalSurface {
public:
    static HelicoidalSurface build(LegendreCurve profile, Axis axis, double c,
                                   Interval theta_range = {0.0, 6.283185307179586});

    const LegendreCurve& profile() const { return profile_; }
    Axis axis() const { return axis_; }
    double slant() const { return c_; }
    SurfaceKind kind() const { return c_ == 0.0 ? SurfaceKind::Revolution : SurfaceKind::Helicoidal; }
    const Interval& theta_range() const { return theta_range_; }
    const HelicoidForms& forms() const { return forms_; }

    double xi(double t) const { return forms_.xi.eval(t); }
    Vec3 position(double t, double theta) const;
    Vec3 position_dt(double t, double theta) const;
    Vec3 position_dtheta(double t, double theta) const;
    Frame frame(double t, double theta) const;

    BasicInvariants invariants_closed_form(double t) const;
    FramedCurvature curvature_closed_form(double t) const;
    Concomitant concomitant_closed_form(double t) const;

    // Independent framed-surface view in (u, v) = (t, theta).
    FramedSurface as_framed_surface() const;

private:
    HelicoidalSurface(LegendreCurve profile, Axis axis, double c, Interval theta_range);

    LegendreCurve profile_;
    Axis axis_;
    double c_;
    Interval theta_range_;
    HelicoidForms forms_;
    ExprVec3 pos_, pos_t_, pos_theta_;
    std::array<ExprVec3, 3> frame_;
};

struct FrontReport {
    bool is_frontal = true;
    bool is_front = true;
    std::vector<double> witnesses;
};

FrontReport classify_frontal_front(const HelicoidalSurface& H);

struct AreaDensity {
    double lambda;
    double lambda_t;
    bool singular;
    bool non_degenerate;
};

AreaDensity signed_area_density(const HelicoidalSurface& H, double t);

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 3>> faces; // zero-based
    int t_count = 0;
    int theta_count = 0;
    bool closed_in_theta = false;
};

Mesh mesh(const HelicoidalSurface& H, int t_samples, int theta_samples);

} // namespace helico
