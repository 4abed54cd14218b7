#include "helico/deform.hpp"

#include <cmath>
#include <numbers>

namespace helico {

namespace {

constexpr double kZero = 1e-10;

double eval_tc(const Expr& e, double t, double c) { return e.eval(t, c); }

std::optional<double> try_eval_t(const Expr& e, double t) { return e.try_eval(t); }

std::string list_ts(const std::vector<double>& ts)
{
    std::string s;
    for (double t : ts)
        s += (s.empty() ? "" : ", ") + std::to_string(t);
    return s;
}

// Zeros of a sampled expression, tolerant of evaluation failures.
std::vector<double> zeros_of(const Expr& f, const Interval& dom)
{
    return find_roots(
        [&](double t) {
            auto v = try_eval_t(f, t);
            return v ? *v : std::numeric_limits<double>::quiet_NaN();
        },
        dom.lo, dom.hi);
}

Vec2 swap_for_axis(const Vec2& p, Axis axis) { return axis == Axis::X ? Vec2(p.y(), p.x()) : p; }

double nearest_branch(double raw, double prev)
{
    return raw + 2.0 * std::numbers::pi * std::round((prev - raw) / (2.0 * std::numbers::pi));
}

SpaceProfile make_space(const LegendreCurve& p, const Expr& lambda, const Expr& c)
{
    SpaceProfile sp;
    const Expr& x = p.x();
    const Expr& C = p.a();
    const Expr& S = p.b();
    Expr xi = sqrt(c * c * S * S + x * x);
    sp.x1 = x + lambda * x * C / xi;
    sp.x2 = -(c * lambda * S) / xi;
    sp.x3 = p.z() + lambda * x * S / xi;
    sp.lambda = lambda;
    sp.domain = p.domain();
    return sp;
}

FocalBranch resolve_branch(const HelicoidForms& f, const LegendreCurve& p, FocalBranch requested, double t_ref,
                           double c)
{
    if (requested != FocalBranch::Auto)
        return requested;
    for (FocalBranch b : {FocalBranch::Minus, FocalBranch::Plus}) {
        Expr lam = focal_lambda_expr(f, b);
        double vars[2] = {t_ref, c};
        auto l = lam.try_eval(std::span<const double>(vars, 2));
        if (!l)
            continue;
        double x = p.x().eval(t_ref), C = p.a().eval(t_ref);
        double xi = f.xi.eval(std::span<const double>(vars, 2));
        double xbar = x + *l * x * C / xi;
        if ((b == FocalBranch::Minus && xbar > 0.0) || (b == FocalBranch::Plus && xbar < 0.0))
            return b;
    }
    return FocalBranch::Minus;
}

PlaneProfile sample_plane(const SpaceProfile& sp, int samples, PlaneConvention conv)
{
    PlaneProfile out;
    out.convention = conv;
    out.axis = sp.axis;
    double psi_prev = 0.0;
    bool have_prev = false;
    int k_prev = 0;
    bool have_k = false;
    for (double t : linspace(sp.domain.lo, sp.domain.hi, samples)) {
        auto a = sp.x1.try_eval(t), b = sp.x2.try_eval(t), z = sp.x3.try_eval(t);
        if (!a || !b || !z)
            continue;
        double x1 = *a, x2 = *b, x3 = *z;
        double r = std::hypot(x1, x2);
        Vec2 lift(r, x3);
        int branch = 0;
        Vec2 pt;
        if (r > 0.0) {
            double psi = std::atan2(x2, x1);
            psi = have_prev ? nearest_branch(psi, psi_prev) : psi;
            psi_prev = psi;
            have_prev = true;
            lift = Vec2(r, x3 - sp.c * psi);
        } else {
            out.degenerate_ts.push_back(t);
        }
        if (conv == PlaneConvention::Quadrant) {
            PlanePoint pp = quadrant_point(x1, x2, x3, sp.c);
            pt = pp.p;
            branch = static_cast<int>(pp.rcase);
        } else if (conv == PlaneConvention::Lifted) {
            pt = lift;
        } else {
            double q = psi_prev / std::numbers::pi;
            if (!have_k || std::fabs(q - k_prev) > 0.5 + 1e-9)
                k_prev = static_cast<int>(std::nearbyint(q));
            have_k = true;
            int k = k_prev;
            double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            pt = Vec2(sgn * lift.x(), lift.y() + sp.c * k * std::numbers::pi);
            branch = k;
        }
        out.ts.push_back(t);
        out.points.push_back(swap_for_axis(pt, sp.axis));
        out.lift.push_back(swap_for_axis(lift, sp.axis));
        out.branch.push_back(branch);
    }
    return out;
}

} // namespace

Vec3 SpaceProfile::at(double t) const { return {x1.eval(t), x2.eval(t), x3.eval(t)}; }

Vec3 SpaceProfile::surface_point(double t, double theta) const
{
    Vec3 q = at(t);
    Vec3 p(q.x() * std::cos(theta) - q.y() * std::sin(theta), q.x() * std::sin(theta) + q.y() * std::cos(theta),
           c * theta + q.z());
    if (axis == Axis::X)
        return {p.z(), p.x(), p.y()};
    return p;
}

PlanePoint quadrant_point(double x1, double x2, double x3, double c)
{
    const double pi = std::numbers::pi;
    if (x1 != 0.0 && x2 != 0.0) {
        double r = std::hypot(x1, x2);
        double X = (x2 > 0.0 ? 1.0 : -1.0) * r;
        if (x1 * x2 > 0.0)
            return {{X, x3 - c * std::atan(x2 / x1)}, QuadrantCase::SameSign};
        return {{X, x3 - c * std::atan(x2 / x1) + c * pi}, QuadrantCase::OppositeSign};
    }
    if (x1 == 0.0 && x2 != 0.0)
        return {{x2, x3 - c * pi / 2.0}, QuadrantCase::X1Zero};
    if (x2 == 0.0 && x1 != 0.0)
        return {{x1, x3}, QuadrantCase::X2Zero};
    return {{0.0, x3}, QuadrantCase::Origin};
}

Vec2 principal_point(double x1, double x2, double x3, double c)
{
    if (x1 == 0.0)
        throw validation_error("x1-vanishes", "x1 vanishes; principal profile undefined");
    double r = std::hypot(x1, x2);
    return {(x1 > 0.0 ? 1.0 : -1.0) * r, x3 - c * std::atan(x2 / x1)};
}

LegendreCurve adapted_profile(const HelicoidalSurface& H)
{
    const LegendreCurve& p = H.profile();
    if (H.axis() == Axis::Z)
        return p;
    return LegendreCurve::with_normal(p.z(), p.x(), p.b(), p.a(), p.domain());
}

SpaceProfile parallel_space_profile(const LegendreCurve& profile, Axis axis, double lambda, double c)
{
    LegendreCurve p = axis == Axis::Z ? profile
                                      : LegendreCurve::with_normal(profile.z(), profile.x(), profile.b(), profile.a(),
                                                                   profile.domain());
    SpaceProfile sp = make_space(p, Expr(lambda), Expr(c));
    sp.provenance = SpaceProvenance::Parallel;
    sp.axis = axis;
    sp.c = c;
    return sp;
}

SpaceProfile parallel_space_profile(const HelicoidalSurface& H, double lambda)
{
    return parallel_space_profile(H.profile(), H.axis(), lambda, H.slant());
}

PlaneProfile space_to_plane(const SpaceProfile& p, int samples)
{
    return sample_plane(p, samples, PlaneConvention::Quadrant);
}

PlaneProfile gamma_lambda_c(const HelicoidalSurface& H, double lambda, double c, int samples)
{
    SpaceProfile sp = parallel_space_profile(H.profile(), H.axis(), lambda, c);
    std::vector<double> bad = zeros_of(sp.x1, sp.domain);
    if (!bad.empty())
        throw validation_error("x1-vanishes", "x1 vanishes (umbilic obstruction) at t = " + list_ts(bad), bad);
    return sample_plane(sp, samples, PlaneConvention::Principal);
}

Vec2 gamma_lambda_c_at(const HelicoidalSurface& H, double lambda, double c, double t)
{
    SpaceProfile sp = parallel_space_profile(H.profile(), H.axis(), lambda, c);
    Vec3 q = sp.at(t);
    return swap_for_axis(principal_point(q.x(), q.y(), q.z(), c), H.axis());
}

Expr phi_expr(const HelicoidalSurface& H, double lambda)
{
    LegendreCurve p = adapted_profile(H);
    Expr c = Expr::variable(1, "c");
    Expr lam(lambda);
    const Expr& x = p.x();
    const Expr& C = p.a();
    const Expr& S = p.b();
    Expr xi2 = c * c * S * S + x * x;
    Expr xi = sqrt(xi2);
    Expr S4 = pow(S, Expr(4.0));
    return p.beta() * (c * c * (c * c - lam * lam) * S4 + (Expr(2.0) * xi2 - x * x) * (x * x + lam * xi * C)) +
           lam * x * p.ell() * ((c * c + x * x) * xi + lam * x * x * C);
}

double Phi(const HelicoidalSurface& H, double lambda, double c, double t)
{
    return eval_tc(phi_expr(H, lambda), t, c);
}

TrackReport track_parallel_singularity(const HelicoidalSurface& H, double lambda, double t0,
                                       const std::vector<double>& c_grid, const RootConfig& cfg)
{
    TrackReport rep;
    LegendreCurve p = adapted_profile(H);
    ParallelHypotheses& h = rep.parallel;
    h.regular = std::fabs(p.beta(t0)) > kZero;
    h.no_vertex = std::fabs(p.vertex_function().eval(t0)) > kZero;
    double x0 = p.x().eval(t0);
    h.x_nonzero = std::fabs(x0) > kZero;
    double x1 = x0 + (x0 > 0 ? 1.0 : -1.0) * lambda * p.a().eval(t0);
    h.not_umbilic = !h.x_nonzero || std::fabs(x1) > kZero;
    if (!h.regular)
        h.violations.push_back("profile singular at t0");
    if (!h.no_vertex)
        h.violations.push_back("profile has a vertex at t0");
    if (!h.x_nonzero)
        h.violations.push_back("profile meets the axis at t0");
    if (!h.not_umbilic)
        h.violations.push_back("umbilic at t0 (x1 vanishes at c = 0)");
    rep.violations = h.violations;

    Expr phi = phi_expr(H, lambda);
    Expr phi_t = diff(phi, 0);
    rep.result = continue_root([&](double c, double t) { return eval_tc(phi, t, c); }, t0, c_grid, cfg,
                               [&](double c, double t) { return eval_tc(phi_t, t, c); });
    for (auto [c, t] : rep.result.branch)
        rep.residuals.push_back(std::fabs(eval_tc(phi, t, c)));
    return rep;
}

Expr focal_lambda_expr(const HelicoidForms& f, FocalBranch branch)
{
    Expr D = f.H * f.H - f.J * f.K;
    if (branch == FocalBranch::Plus)
        return f.J / (f.H - sqrt(D));
    return f.J / (f.H + sqrt(D));
}

SpaceProfile focal_space_profile(const HelicoidalSurface& H, const FocalOptions& opts)
{
    LegendreCurve p = adapted_profile(H);
    Expr c(H.slant());
    HelicoidForms f = helicoid_forms(p, Axis::Z, c);
    const Interval& dom = p.domain();
    Expr D = f.H * f.H - f.J * f.K;
    std::vector<double> negative;
    for (double t : linspace(dom.lo, dom.hi, 1001)) {
        double h = f.H.eval(t), j = f.J.eval(t), k = f.K.eval(t);
        double d = h * h - j * k;
        if (d < -1e-12 * (h * h + std::fabs(j * k)) && (negative.empty() || t - negative.back() > 1e-3))
            negative.push_back(t);
    }
    if (!negative.empty())
        throw validation_error("discriminant-negative",
                               "focal quadratic has complex roots at t = " + list_ts(negative), negative);
    FocalBranch b = resolve_branch(f, p, opts.branch, 0.5 * (dom.lo + dom.hi), H.slant());
    Expr lam = focal_lambda_expr(f, b);
    if (!opts.allow_poles) {
        Expr denom = b == FocalBranch::Plus ? f.H - sqrt(D) : f.H + sqrt(D);
        std::vector<double> poles;
        for (double t : zeros_of(denom, dom)) {
            auto j = f.J.try_eval(t);
            if (!j || std::fabs(*j) > 1e-8)
                poles.push_back(t);
        }
        if (!poles.empty())
            throw validation_error("kf-vanishes",
                                   "selected focal branch is unbounded where K_F vanishes, near t = " + list_ts(poles),
                                   poles);
    }
    SpaceProfile sp = make_space(p, lam, c);
    sp.provenance = SpaceProvenance::Focal;
    sp.branch = b;
    sp.axis = H.axis();
    sp.c = H.slant();
    return sp;
}

PlaneProfile delta_c(const HelicoidalSurface& H, const FocalOptions& focal, const DeltaOptions& opts)
{
    SpaceProfile sp = focal_space_profile(H, focal);
    if (opts.on_axis)
        return sample_plane(sp, opts.samples, PlaneConvention::Quadrant);
    if (!opts.split_at_axis) {
        std::vector<double> bad = zeros_of(sp.x1, sp.domain);
        if (!bad.empty())
            throw validation_error("xbar-vanishes", "xbar vanishes at t = " + list_ts(bad), bad);
    }
    return sample_plane(sp, opts.samples, PlaneConvention::Principal);
}

TrackReport track_focal_singularity(const HelicoidalSurface& H, double t0, const std::vector<double>& c_grid,
                                    const RootConfig& cfg)
{
    TrackReport rep;
    if (c_grid.empty())
        return rep;
    const double c0 = c_grid.front();
    LegendreCurve p = adapted_profile(H);
    Expr cvar = Expr::variable(1, "c");
    HelicoidForms f = helicoid_forms(p, Axis::Z, cvar);
    rep.branch = resolve_branch(f, p, FocalBranch::Auto, t0, c0);
    Expr lam = focal_lambda_expr(f, rep.branch);

    VertexReport vr;
    double v0 = p.vertex_function().eval(t0);
    rep.ordinary_vertex = std::fabs(v0) <= 1e-8 && std::fabs(p.ell(t0)) > kZero &&
                          std::fabs(p.vertex_quantity().eval(t0)) > kZero;
    if (!rep.ordinary_vertex)
        rep.violations.push_back("t0 is not an ordinary vertex of the profile");
    double x0 = p.x().eval(t0);
    if (std::fabs(x0) <= kZero)
        rep.violations.push_back("profile meets the axis at t0");
    rep.kf_nonzero = std::fabs(eval_tc(f.K, t0, c0)) > kZero;
    if (!rep.kf_nonzero)
        rep.violations.push_back("K_F vanishes at t0");
    double vars[2] = {t0, c0};
    auto l0 = lam.try_eval(std::span<const double>(vars, 2));
    double C = p.a().eval(t0), S = p.b().eval(t0);
    double xi = f.xi.eval(std::span<const double>(vars, 2));
    if (l0) {
        double xbar = x0 + *l0 * x0 * C / xi;
        rep.xbar_nonzero = std::fabs(xbar) > kZero;
        rep.delta1 = *l0 * xi * xi + x0 * x0 * (-*l0 * S * S + xi * C);
        rep.delta2 = S * (c0 * c0 * xi + x0 * x0 * (*l0 * C + xi));
    } else {
        rep.xbar_nonzero = false;
    }
    if (!rep.xbar_nonzero)
        rep.violations.push_back("xbar vanishes at t0 (umbilic at c = 0)");
    if (std::fabs(rep.delta1) <= kZero && std::fabs(rep.delta2) <= kZero)
        rep.violations.push_back("Delta1 and Delta2 vanish together at the seed");

    Expr F = diff(lam, 0);
    Expr Ft = diff(F, 0);
    if (!F.try_eval(std::span<const double>(vars, 2))) {
        rep.result.status = ContinuationStatus::Fold;
        rep.result.message = "focal parameter is not differentiable at the seed";
        rep.violations.push_back(rep.result.message);
        return rep;
    }
    rep.result = continue_root([&](double c, double t) { return eval_tc(F, t, c); }, t0, c_grid, cfg,
                               [&](double c, double t) { return eval_tc(Ft, t, c); });
    for (auto [c, t] : rep.result.branch)
        rep.residuals.push_back(std::fabs(eval_tc(F, t, c)));
    return rep;
}

std::pair<Expr, Expr> lifted_plane_exprs(const SpaceProfile& p)
{
    Expr X = sqrt(p.x1 * p.x1 + p.x2 * p.x2);
    Expr Z = p.x3 - Expr(p.c) * atan2(p.x2, p.x1);
    if (p.axis == Axis::X)
        return {Z, X};
    return {X, Z};
}

std::vector<double> find_cusps(const Expr& X, const Expr& Z, const Interval& dom, int samples)
{
    Expr Xd = diff(X), Zd = diff(Z);
    auto speed = [&](double t) -> double {
        auto a = Xd.try_eval(t), b = Zd.try_eval(t);
        if (!a || !b)
            return std::numeric_limits<double>::quiet_NaN();
        return std::hypot(*a, *b);
    };
    auto tangent = [&](double t) -> std::optional<Vec2> {
        auto a = Xd.try_eval(t), b = Zd.try_eval(t);
        if (!a || !b)
            return std::nullopt;
        Vec2 v(*a, *b);
        double n = v.norm();
        if (!(n > 0.0))
            return std::nullopt;
        return v / n;
    };
    std::vector<double> ts = linspace(dom.lo, dom.hi, samples);
    std::vector<double> vs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        vs[i] = speed(ts[i]);
    const double h = ts[1] - ts[0];
    std::vector<double> cusps;
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        if (!std::isfinite(vs[i - 1]) || !std::isfinite(vs[i]) || !std::isfinite(vs[i + 1]))
            continue;
        if (vs[i] > vs[i - 1] || vs[i] > vs[i + 1])
            continue;
        double a = ts[i - 1], b = ts[i + 1];
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = speed(x1), f2 = speed(x2);
        for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
            if (!(f1 >= f2)) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = speed(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = speed(x2);
            }
        }
        double tm = 0.5 * (a + b);
        double sm = speed(tm);
        double scale = std::max(vs[i - 1], vs[i + 1]);
        if (!(sm <= 1e-4 * scale))
            continue;
        auto Tin = tangent(tm - 0.5 * h), Tout = tangent(tm + 0.5 * h);
        if (!Tin || !Tout || Tin->dot(*Tout) >= -0.9)
            continue;
        if (cusps.empty() || tm - cusps.back() > h)
            cusps.push_back(tm);
    }
    return cusps;
}

} // namespace helico
