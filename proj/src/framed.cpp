#include "helico/framed.hpp"

#include <cmath>
#include <mutex>

#include "helico/numerics.hpp"

namespace helico {

namespace {

constexpr double kZero = 1e-10;

Expr dot(const ExprVec3& a, const ExprVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

ExprVec3 cross(const ExprVec3& a, const ExprVec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

ExprVec3 partial(const ExprVec3& a, int var) { return {diff(a[0], var), diff(a[1], var), diff(a[2], var)}; }

Vec3 eval3(const ExprVec3& a, double u, double v)
{
    double vars[2] = {u, v};
    std::span<const double> sp(vars, 2);
    return {a[0].eval(sp), a[1].eval(sp), a[2].eval(sp)};
}

BasicInvariants project(const FramePoint& p)
{
    Vec3 t = p.t();
    BasicInvariants I;
    I.a1 = p.xu.dot(p.s);
    I.b1 = p.xu.dot(t);
    I.a2 = p.xv.dot(p.s);
    I.b2 = p.xv.dot(t);
    I.e1 = p.nu.dot(p.s);
    I.f1 = p.nu.dot(t);
    I.g1 = p.su.dot(t);
    I.e2 = p.nv.dot(p.s);
    I.f2 = p.nv.dot(t);
    I.g2 = p.sv.dot(t);
    return I;
}

Vec3 fd_partial(const FramedSurface::Field& f, double u, double v, int var)
{
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
        auto g = [&](double w) { return var == 0 ? f(w, v)[k] : f(u, w)[k]; };
        out[k] = derivative(g, var == 0 ? u : v, 1);
    }
    return out;
}

} // namespace

struct FramedSurface::Symbolic {
    ExprVec3 x, n, s;
    ExprVec3 xu, xv, nu, nv, su, sv;
    std::array<Expr, 10> inv;
    mutable std::once_flag partials_once;
    mutable std::array<Expr, 10> inv_u, inv_v;

    double eval(const Expr& e, double u, double v) const
    {
        double vars[2] = {u, v};
        return e.eval(std::span<const double>(vars, 2));
    }

    void ensure_partials() const
    {
        std::call_once(partials_once, [this] {
            for (int i = 0; i < 10; ++i) {
                inv_u[i] = diff(inv[i], 0);
                inv_v[i] = diff(inv[i], 1);
            }
        });
    }
};

FramedSurface FramedSurface::symbolic(ExprVec3 x, ExprVec3 n, ExprVec3 s, Rect domain)
{
    auto sym = std::make_shared<Symbolic>();
    sym->x = std::move(x);
    sym->n = std::move(n);
    sym->s = std::move(s);
    sym->xu = partial(sym->x, 0);
    sym->xv = partial(sym->x, 1);
    sym->nu = partial(sym->n, 0);
    sym->nv = partial(sym->n, 1);
    sym->su = partial(sym->s, 0);
    sym->sv = partial(sym->s, 1);
    ExprVec3 t = cross(sym->n, sym->s);
    sym->inv = {dot(sym->xu, sym->s), dot(sym->xu, t), dot(sym->xv, sym->s), dot(sym->xv, t),
                dot(sym->nu, sym->s), dot(sym->nu, t), dot(sym->su, t),
                dot(sym->nv, sym->s), dot(sym->nv, t), dot(sym->sv, t)};
    FramedSurface S;
    S.domain_ = domain;
    S.sym_ = std::move(sym);
    return S;
}

FramedSurface FramedSurface::callable(Field x, Field n, Field s, Rect domain)
{
    FramedSurface S;
    S.domain_ = domain;
    S.xf_ = std::move(x);
    S.nf_ = std::move(n);
    S.sf_ = std::move(s);
    return S;
}

Vec3 FramedSurface::x(double u, double v) const { return sym_ ? eval3(sym_->x, u, v) : xf_(u, v); }
Vec3 FramedSurface::n(double u, double v) const { return sym_ ? eval3(sym_->n, u, v) : nf_(u, v); }
Vec3 FramedSurface::s(double u, double v) const { return sym_ ? eval3(sym_->s, u, v) : sf_(u, v); }

const ExprVec3& FramedSurface::x_expr() const
{
    if (!sym_)
        throw validation_error("not-symbolic", "surface has no symbolic backend");
    return sym_->x;
}

const ExprVec3& FramedSurface::n_expr() const
{
    if (!sym_)
        throw validation_error("not-symbolic", "surface has no symbolic backend");
    return sym_->n;
}

const ExprVec3& FramedSurface::s_expr() const
{
    if (!sym_)
        throw validation_error("not-symbolic", "surface has no symbolic backend");
    return sym_->s;
}

FramePoint FramedSurface::point(double u, double v) const
{
    FramePoint p;
    if (sym_) {
        p.x = eval3(sym_->x, u, v);
        p.xu = eval3(sym_->xu, u, v);
        p.xv = eval3(sym_->xv, u, v);
        p.n = eval3(sym_->n, u, v);
        p.nu = eval3(sym_->nu, u, v);
        p.nv = eval3(sym_->nv, u, v);
        p.s = eval3(sym_->s, u, v);
        p.su = eval3(sym_->su, u, v);
        p.sv = eval3(sym_->sv, u, v);
        return p;
    }
    p.x = xf_(u, v);
    p.n = nf_(u, v);
    p.s = sf_(u, v);
    p.xu = fd_partial(xf_, u, v, 0);
    p.xv = fd_partial(xf_, u, v, 1);
    p.nu = fd_partial(nf_, u, v, 0);
    p.nv = fd_partial(nf_, u, v, 1);
    p.su = fd_partial(sf_, u, v, 0);
    p.sv = fd_partial(sf_, u, v, 1);
    return p;
}

BasicInvariants FramedSurface::invariants(double u, double v) const
{
    if (sym_) {
        BasicInvariants I;
        double* f[10] = {&I.a1, &I.b1, &I.a2, &I.b2, &I.e1, &I.f1, &I.g1, &I.e2, &I.f2, &I.g2};
        for (int i = 0; i < 10; ++i)
            *f[i] = sym_->eval(sym_->inv[i], u, v);
        return I;
    }
    return project(point(u, v));
}

std::array<double, 10> FramedSurface::invariants_du(double u, double v) const
{
    std::array<double, 10> out{};
    if (sym_) {
        sym_->ensure_partials();
        for (int i = 0; i < 10; ++i)
            out[i] = sym_->eval(sym_->inv_u[i], u, v);
        return out;
    }
    for (int i = 0; i < 10; ++i)
        out[i] = derivative([&](double w) { return invariants(w, v).as_array()[i]; }, u, 1);
    return out;
}

std::array<double, 10> FramedSurface::invariants_dv(double u, double v) const
{
    std::array<double, 10> out{};
    if (sym_) {
        sym_->ensure_partials();
        for (int i = 0; i < 10; ++i)
            out[i] = sym_->eval(sym_->inv_v[i], u, v);
        return out;
    }
    for (int i = 0; i < 10; ++i)
        out[i] = derivative([&](double w) { return invariants(u, w).as_array()[i]; }, v, 1);
    return out;
}

BasicInvariants basic_invariants(const FramedSurface& S, double u, double v) { return S.invariants(u, v); }

std::array<double, 6> integrability_residual(const FramedSurface& S, double u, double v)
{
    BasicInvariants I = S.invariants(u, v);
    auto du = S.invariants_du(u, v);
    auto dv = S.invariants_dv(u, v);
    // Index order: a1 b1 a2 b2 e1 f1 g1 e2 f2 g2.
    enum { A1, B1, A2, B2, E1, F1, G1, E2, F2, G2 };
    return {
        (dv[A1] - I.b1 * I.g2) - (du[A2] - I.b2 * I.g1),
        (dv[B1] - I.a2 * I.g1) - (du[B2] - I.a1 * I.g2),
        (I.a1 * I.e2 + I.b1 * I.f2) - (I.a2 * I.e1 + I.b2 * I.f1),
        (dv[E1] - I.f1 * I.g2) - (du[E2] - I.f2 * I.g1),
        (dv[F1] - I.e2 * I.g1) - (du[F2] - I.e1 * I.g2),
        (dv[G1] - I.e1 * I.f2) - (du[G2] - I.e2 * I.f1),
    };
}

Eigen::Matrix3d frame_matrix_u(const BasicInvariants& I)
{
    Eigen::Matrix3d F;
    F << 0, I.e1, I.f1, -I.e1, 0, I.g1, -I.f1, -I.g1, 0;
    return F;
}

Eigen::Matrix3d frame_matrix_v(const BasicInvariants& I)
{
    Eigen::Matrix3d F;
    F << 0, I.e2, I.f2, -I.e2, 0, I.g2, -I.f2, -I.g2, 0;
    return F;
}

Eigen::Matrix3d frame_compatibility_residual(const FramedSurface& S, double u, double v)
{
    BasicInvariants I = S.invariants(u, v);
    auto du = S.invariants_du(u, v);
    auto dv = S.invariants_dv(u, v);
    BasicInvariants Iu, Iv;
    Iu.e2 = du[7];
    Iu.f2 = du[8];
    Iu.g2 = du[9];
    Iv.e1 = dv[4];
    Iv.f1 = dv[5];
    Iv.g1 = dv[6];
    Eigen::Matrix3d F1 = frame_matrix_u(I), F2 = frame_matrix_v(I);
    return frame_matrix_v(Iu) - frame_matrix_u(Iv) - (F1 * F2 - F2 * F1);
}

FramedCurvature curvature_of(const BasicInvariants& I)
{
    FramedCurvature C;
    C.J = I.a1 * I.b2 - I.a2 * I.b1;
    C.K = I.e1 * I.f2 - I.e2 * I.f1;
    C.H = -0.5 * ((I.a1 * I.f2 - I.a2 * I.f1) - (I.b1 * I.e2 - I.b2 * I.e1));
    return C;
}

Concomitant concomitant_of(const BasicInvariants& I)
{
    FramedCurvature C = curvature_of(I);
    return {C.J,
            C.K,
            C.H,
            I.a1 * I.g2 - I.a2 * I.g1,
            I.b1 * I.g2 - I.b2 * I.g1,
            I.e1 * I.g2 - I.e2 * I.g1,
            I.f1 * I.g2 - I.f2 * I.g1,
            I.a1 * I.e2 - I.a2 * I.e1};
}

SurfaceFlags classify_of(const Concomitant& I)
{
    SurfaceFlags f;
    f.regular = std::fabs(I[0]) > kZero;
    f.legendre_immersion = f.regular || std::fabs(I[1]) > kZero || std::fabs(I[2]) > kZero;
    f.framed_immersion = f.legendre_immersion;
    for (int i = 3; i < 8; ++i)
        f.framed_immersion = f.framed_immersion || std::fabs(I[i]) > kZero;
    return f;
}

FocalRoots focal_lambdas_of(const FramedCurvature& C)
{
    FocalRoots r;
    if (std::fabs(C.K) <= kZero) {
        if (std::fabs(C.H) > kZero) {
            r.status = FocalStatus::One;
            r.lambdas = {C.J / (2.0 * C.H)};
        } else {
            r.status = std::fabs(C.J) <= kZero ? FocalStatus::Indeterminate : FocalStatus::None;
        }
        return r;
    }
    double disc = C.H * C.H - C.J * C.K;
    double scale = C.H * C.H + std::fabs(C.J * C.K);
    if (disc < 0.0) {
        if (disc < -1e-14 * scale) {
            r.status = FocalStatus::None;
            return r;
        }
        disc = 0.0;
    }
    double q = C.H + std::copysign(std::sqrt(disc), C.H);
    double l1 = q / C.K;
    double l2 = q != 0.0 ? C.J / q : l1;
    r.status = FocalStatus::Two;
    r.lambdas = {std::min(l1, l2), std::max(l1, l2)};
    return r;
}

FramedCurvature curvature(const FramedSurface& S, double u, double v) { return curvature_of(S.invariants(u, v)); }

Concomitant concomitant(const FramedSurface& S, double u, double v) { return concomitant_of(S.invariants(u, v)); }

SurfaceFlags classify(const FramedSurface& S, double u, double v) { return classify_of(concomitant(S, u, v)); }

FocalRoots focal_lambdas(const FramedSurface& S, double u, double v) { return focal_lambdas_of(curvature(S, u, v)); }

FramedSurface parallel_surface(const FramedSurface& S, double lambda)
{
    if (S.is_symbolic()) {
        const ExprVec3& x = S.x_expr();
        const ExprVec3& n = S.n_expr();
        Expr lam(lambda);
        return FramedSurface::symbolic({x[0] + lam * n[0], x[1] + lam * n[1], x[2] + lam * n[2]}, n, S.s_expr(),
                                       S.domain());
    }
    return FramedSurface::callable([S, lambda](double u, double v) { return S.x(u, v) + lambda * S.n(u, v); },
                                   [S](double u, double v) { return S.n(u, v); },
                                   [S](double u, double v) { return S.s(u, v); }, S.domain());
}

} // namespace helico
