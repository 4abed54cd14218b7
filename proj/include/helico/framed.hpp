#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "helico/expr.hpp"

namespace helico {

using Vec3 = Eigen::Vector3d;
using ExprVec3 = std::array<Expr, 3>;

struct Rect {
    double u0 = 0.0, u1 = 1.0;
    double v0 = 0.0, v1 = 1.0;
};

struct FramePoint {
    Vec3 x, xu, xv;
    Vec3 n, nu, nv;
    Vec3 s, su, sv;
    Vec3 t() const { return n.cross(s); }
};

struct BasicInvariants {
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    double e1 = 0, f1 = 0, g1 = 0;
    double e2 = 0, f2 = 0, g2 = 0;

    std::array<double, 10> as_array() const { return {a1, b1, a2, b2, e1, f1, g1, e2, f2, g2}; }
};

struct FramedCurvature {
    double J = 0, K = 0, H = 0;
};

using Concomitant = std::array<double, 8>;

struct SurfaceFlags {
    bool regular = false;
    bool legendre_immersion = false;
    bool framed_immersion = false;
};

enum class FocalStatus { None, One, Two, Indeterminate };

struct FocalRoots {
    FocalStatus status = FocalStatus::None;
    std::vector<double> lambdas; // ascending; a double root appears twice
};

// Surface x(u, v) with orthonormal pair (n, s), n normal to x. The symbolic
// backend holds expressions in variables u (index 0) and v (index 1); the
// callable backend uses finite differences.
class FramedSurface {
public:
    using Field = std::function<Vec3(double, double)>;

    static FramedSurface symbolic(ExprVec3 x, ExprVec3 n, ExprVec3 s, Rect domain);
    static FramedSurface callable(Field x, Field n, Field s, Rect domain);

    bool is_symbolic() const { return static_cast<bool>(sym_); }
    const Rect& domain() const { return domain_; }

    Vec3 x(double u, double v) const;
    Vec3 n(double u, double v) const;
    Vec3 s(double u, double v) const;
    FramePoint point(double u, double v) const;

    BasicInvariants invariants(double u, double v) const;
    // Partial derivatives of the ten invariants, in as_array order.
    std::array<double, 10> invariants_du(double u, double v) const;
    std::array<double, 10> invariants_dv(double u, double v) const;

    // Symbolic expressions of the surface fields (symbolic backend only).
    const ExprVec3& x_expr() const;
    const ExprVec3& n_expr() const;
    const ExprVec3& s_expr() const;

private:
    struct Symbolic;
    Rect domain_;
    std::shared_ptr<const Symbolic> sym_;
    Field xf_, nf_, sf_;
};

BasicInvariants basic_invariants(const FramedSurface& S, double u, double v);
std::array<double, 6> integrability_residual(const FramedSurface& S, double u, double v);
// F2_u - F1_v - (F1 F2 - F2 F1), entrywise.
Eigen::Matrix3d frame_compatibility_residual(const FramedSurface& S, double u, double v);

FramedCurvature curvature_of(const BasicInvariants& I);
Concomitant concomitant_of(const BasicInvariants& I);
SurfaceFlags classify_of(const Concomitant& I);
FocalRoots focal_lambdas_of(const FramedCurvature& C);

FramedCurvature curvature(const FramedSurface& S, double u, double v);
Concomitant concomitant(const FramedSurface& S, double u, double v);
SurfaceFlags classify(const FramedSurface& S, double u, double v);
FocalRoots focal_lambdas(const FramedSurface& S, double u, double v);

FramedSurface parallel_surface(const FramedSurface& S, double lambda);

Eigen::Matrix3d frame_matrix_u(const BasicInvariants& I);
Eigen::Matrix3d frame_matrix_v(const BasicInvariants& I);

} // namespace helico
