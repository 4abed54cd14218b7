#include "helico/helicoid.hpp"

#include <cmath>
#include <numbers>

namespace helico {

namespace {

constexpr double kZero = 1e-10;
constexpr double kXiTol = 1e-7;

Vec3 eval3(const ExprVec3& a, double t, double theta)
{
    double vars[2] = {t, theta};
    std::span<const double> sp(vars, 2);
    return {a[0].eval(sp), a[1].eval(sp), a[2].eval(sp)};
}

ExprVec3 partial(const ExprVec3& a, int var) { return {diff(a[0], var), diff(a[1], var), diff(a[2], var)}; }

// Parameter values where sqrt(f) (f >= 0) drops below tol, by refining the
// local minima of sampled f.
std::vector<double> near_zeros_of_square(const Expr& f, const Interval& dom, double tol)
{
    const int n = 2001;
    std::vector<double> ts = linspace(dom.lo, dom.hi, n);
    std::vector<double> vs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        vs[i] = f.eval(ts[i]);
    std::vector<double> out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        bool left = i == 0 || vs[i] <= vs[i - 1];
        bool right = i + 1 == ts.size() || vs[i] <= vs[i + 1];
        if (!left || !right)
            continue;
        double a = ts[i == 0 ? 0 : i - 1], b = ts[i + 1 == ts.size() ? i : i + 1];
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = f.eval(x1), f2 = f.eval(x2);
        for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = f.eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = f.eval(x2);
            }
        }
        double tm = vs[i] <= std::min(f1, f2) ? ts[i] : 0.5 * (a + b);
        double fm = std::min(vs[i], f.eval(tm));
        if (std::sqrt(std::max(fm, 0.0)) <= tol && (out.empty() || tm - out.back() > 1e-6))
            out.push_back(tm);
    }
    return out;
}

std::vector<double> simultaneous_zeros(const Expr& f, const Expr& g, const Interval& dom)
{
    Expr sq = f * f + g * g;
    std::vector<double> out;
    for (double t : near_zeros_of_square(sq, dom, 1e-7)) {
        double r = std::fabs(t) < 1e-7 ? 0.0 : t;
        out.push_back(r);
    }
    return out;
}

} // namespace

HelicoidForms helicoid_forms(const LegendreCurve& p, Axis axis, const Expr& c)
{
    HelicoidForms F;
    const Expr& C = p.a();
    const Expr& S = p.b();
    const Expr& beta = p.beta();
    const Expr& ell = p.ell();
    Expr two(2.0);
    if (axis == Axis::Z) {
        const Expr& x = p.x();
        Expr xi2 = c * c * S * S + x * x;
        Expr xi = sqrt(xi2);
        F.xi = xi;
        F.inv = {Expr(0.0),
                 -beta,
                 -xi,
                 -(c * C),
                 c * (beta * S * S + ell * x * C) / xi2,
                 -(ell * x) / xi,
                 c * ell * S / xi,
                 -C,
                 c * S * S / xi,
                 x * S / xi};
        F.J = -(beta * xi);
        F.K = (c * c * beta * pow(S, Expr(4.0)) - pow(x, Expr(3.0)) * ell * C) / (xi2 * xi);
        F.H = (beta * (xi2 + c * c * S * S) * C + x * ell * (c * c + x * x)) / (two * xi2);
        F.concomitant = {F.J,
                         F.K,
                         F.H,
                         c * ell * S,
                         -((x * beta - c * c * ell * C) * S) / xi,
                         c * ((x * beta * S * S + ell * (x * x + xi2) * C) * S) / (xi2 * xi),
                         -(ell * S),
                         c * (beta * S * S + x * ell * C) / xi};
    } else {
        const Expr& z = p.z();
        Expr xi2 = c * c * C * C + z * z;
        Expr xi = sqrt(xi2);
        F.xi = xi;
        F.inv = {Expr(0.0),
                 beta,
                 -xi,
                 -(c * S),
                 -(c * (beta * C * C + z * ell * S)) / xi2,
                 z * ell / xi,
                 -(c * ell * C) / xi,
                 -S,
                 c * C * C / xi,
                 z * C / xi};
        F.J = beta * xi;
        F.K = -(c * c * beta * pow(C, Expr(4.0)) - pow(z, Expr(3.0)) * ell * S) / (xi2 * xi);
        F.H = -(beta * (xi2 + c * c * C * C) * S + z * ell * (c * c + z * z)) / (two * xi2);
        F.concomitant = {F.J,
                         F.K,
                         F.H,
                         -(c * ell * C),
                         (beta * z - c * c * ell * S) * C / xi,
                         -(c * (beta * z * C * C + ell * (xi2 + z * z) * S) * C) / (xi2 * xi),
                         ell * C,
                         -(c * (beta * C * C + z * ell * S)) / xi};
    }
    return F;
}

ExprVec3 helicoid_position(const LegendreCurve& p, Axis axis, const Expr& c, const Expr& theta)
{
    if (axis == Axis::Z)
        return {p.x() * cos(theta), p.x() * sin(theta), c * theta + p.z()};
    return {c * theta + p.x(), p.z() * cos(theta), p.z() * sin(theta)};
}

std::array<ExprVec3, 3> helicoid_frame(const LegendreCurve& p, Axis axis, const Expr& c, const Expr& theta)
{
    const Expr& C = p.a();
    const Expr& S = p.b();
    Expr ct = cos(theta), st = sin(theta);
    if (axis == Axis::Z) {
        const Expr& x = p.x();
        Expr xi = sqrt(c * c * S * S + x * x);
        ExprVec3 n = {(c * S * st + x * C * ct) / xi, (-(c * S * ct) + x * C * st) / xi, x * S / xi};
        ExprVec3 s = {(-(c * S * C * ct) + x * st) / xi, (-(c * S * C * st) - x * ct) / xi, -(c * S * S) / xi};
        ExprVec3 t = {S * ct, S * st, -C};
        return {n, s, t};
    }
    const Expr& z = p.z();
    Expr xi = sqrt(c * c * C * C + z * z);
    ExprVec3 n = {z * C / xi, (c * C * st + z * S * ct) / xi, (-(c * C * ct) + z * S * st) / xi};
    ExprVec3 s = {-(c * C * C) / xi, (z * st - c * S * C * ct) / xi, (-(c * S * C * st) - z * ct) / xi};
    ExprVec3 t = {-S, C * ct, C * st};
    return {n, s, t};
}

HelicoidalSurface::HelicoidalSurface(LegendreCurve profile, Axis axis, double c, Interval theta_range)
    : profile_(std::move(profile)), axis_(axis), c_(c), theta_range_(theta_range)
{
    Expr cc(c);
    Expr theta = Expr::variable(1, "theta");
    forms_ = helicoid_forms(profile_, axis_, cc);
    pos_ = helicoid_position(profile_, axis_, cc, theta);
    pos_t_ = partial(pos_, 0);
    pos_theta_ = partial(pos_, 1);
    frame_ = helicoid_frame(profile_, axis_, cc, theta);
}

HelicoidalSurface HelicoidalSurface::build(LegendreCurve profile, Axis axis, double c, Interval theta_range)
{
    if (!std::isfinite(c))
        throw validation_error("invalid-slant", "slant must be finite");
    if (!(theta_range.lo < theta_range.hi))
        throw validation_error("invalid-domain", "theta range must satisfy min < max");
    const Expr& trig = axis == Axis::Z ? profile.b() : profile.a();
    const Expr& coord = axis == Axis::Z ? profile.x() : profile.z();
    Expr xi2 = Expr(c * c) * trig * trig + coord * coord;
    std::vector<double> bad = near_zeros_of_square(xi2, profile.domain(), kXiTol);
    if (!bad.empty()) {
        std::string list;
        for (double t : bad)
            list += (list.empty() ? "" : ", ") + std::to_string(t);
        throw validation_error("xi-vanishes", "xi vanishes on the profile domain at t = " + list, bad);
    }
    return HelicoidalSurface(std::move(profile), axis, c, theta_range);
}

Vec3 HelicoidalSurface::position(double t, double theta) const { return eval3(pos_, t, theta); }
Vec3 HelicoidalSurface::position_dt(double t, double theta) const { return eval3(pos_t_, t, theta); }
Vec3 HelicoidalSurface::position_dtheta(double t, double theta) const { return eval3(pos_theta_, t, theta); }

Frame HelicoidalSurface::frame(double t, double theta) const
{
    return {eval3(frame_[0], t, theta), eval3(frame_[1], t, theta), eval3(frame_[2], t, theta)};
}

BasicInvariants HelicoidalSurface::invariants_closed_form(double t) const
{
    BasicInvariants I;
    double* f[10] = {&I.a1, &I.b1, &I.a2, &I.b2, &I.e1, &I.f1, &I.g1, &I.e2, &I.f2, &I.g2};
    for (int i = 0; i < 10; ++i)
        *f[i] = forms_.inv[i].eval(t);
    return I;
}

FramedCurvature HelicoidalSurface::curvature_closed_form(double t) const
{
    return {forms_.J.eval(t), forms_.K.eval(t), forms_.H.eval(t)};
}

Concomitant HelicoidalSurface::concomitant_closed_form(double t) const
{
    Concomitant out;
    for (int i = 0; i < 8; ++i)
        out[i] = forms_.concomitant[i].eval(t);
    return out;
}

FramedSurface HelicoidalSurface::as_framed_surface() const
{
    return FramedSurface::symbolic(pos_, frame_[0], frame_[1],
                                   {profile_.domain().lo, profile_.domain().hi, theta_range_.lo, theta_range_.hi});
}

FrontReport classify_frontal_front(const HelicoidalSurface& H)
{
    FrontReport r;
    const LegendreCurve& p = H.profile();
    // The frontal property holds on both branches of the classification.
    r.is_frontal = true;
    std::vector<double> w = simultaneous_zeros(p.ell(), p.beta(), p.domain());
    const Expr& coord = H.axis() == Axis::Z ? p.x() : p.z();
    std::vector<double> w2;
    if (H.slant() == 0.0)
        w2 = simultaneous_zeros(coord, H.axis() == Axis::Z ? p.a() : p.b(), p.domain());
    else
        w2 = simultaneous_zeros(coord, p.beta(), p.domain());
    w.insert(w.end(), w2.begin(), w2.end());
    std::sort(w.begin(), w.end());
    for (double t : w)
        if (r.witnesses.empty() || t - r.witnesses.back() > 1e-6)
            r.witnesses.push_back(t);
    r.is_front = r.witnesses.empty();
    return r;
}

AreaDensity signed_area_density(const HelicoidalSurface& H, double t)
{
    AreaDensity d;
    d.lambda = H.forms().J.eval(t);
    d.lambda_t = diff(H.forms().J).eval(t);
    d.singular = std::fabs(d.lambda) <= kZero;
    d.non_degenerate = d.singular && std::fabs(d.lambda_t) > kZero;
    return d;
}

Mesh mesh(const HelicoidalSurface& H, int t_samples, int theta_samples)
{
    if (t_samples < 2 || theta_samples < 2)
        throw validation_error("invalid-samples", "mesh needs at least two samples in each direction");
    Mesh m;
    m.t_count = t_samples;
    m.theta_count = theta_samples;
    const Interval& th = H.theta_range();
    m.closed_in_theta = std::fabs((th.hi - th.lo) - 2.0 * std::numbers::pi) < 1e-9;
    std::vector<double> ts = linspace(H.profile().domain().lo, H.profile().domain().hi, t_samples);
    std::vector<double> thetas = linspace(th.lo, th.hi, theta_samples);
    m.vertices.reserve(ts.size() * thetas.size());
    m.normals.reserve(ts.size() * thetas.size());
    for (double t : ts)
        for (double theta : thetas) {
            m.vertices.push_back(H.position(t, theta));
            m.normals.push_back(H.frame(t, theta).n.normalized());
        }
    auto id = [&](int i, int j) { return i * theta_samples + j; };
    for (int i = 0; i + 1 < t_samples; ++i)
        for (int j = 0; j + 1 < theta_samples; ++j) {
            int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            double d_ac = (m.vertices[a] - m.vertices[c]).squaredNorm();
            double d_bd = (m.vertices[b] - m.vertices[d]).squaredNorm();
            if (d_ac <= d_bd) {
                m.faces.push_back({a, b, c});
                m.faces.push_back({a, c, d});
            } else {
                m.faces.push_back({a, b, d});
                m.faces.push_back({b, c, d});
            }
        }
    return m;
}

} // namespace helico
