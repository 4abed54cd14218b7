#include "helico/legendre.hpp"

#include <cmath>

namespace helico {

namespace {

constexpr int kCheckSamples = 1001;
constexpr double kZero = 1e-10;

} // namespace

LegendreCurve::LegendreCurve(NuSource source, Expr x, Expr z, Expr a, Expr b, std::optional<Expr> phi,
                             Interval domain)
    : source_(source), domain_(domain), x_(std::move(x)), z_(std::move(z)), a_(std::move(a)), b_(std::move(b)),
      phi_(std::move(phi))
{
    if (!(domain_.lo < domain_.hi) || !std::isfinite(domain_.lo) || !std::isfinite(domain_.hi))
        throw validation_error("invalid-domain", "curve domain must satisfy t_min < t_max");
    xd_ = diff(x_);
    zd_ = diff(z_);
    ad_ = diff(a_);
    bd_ = diff(b_);
    beta_ = zd_ * a_ - xd_ * b_;
    ell_ = bd_ * a_ - ad_ * b_;
    beta_d_ = diff(beta_);
    ell_d_ = diff(ell_);
}

LegendreCurve LegendreCurve::from_tangent(Expr x, Expr z, Interval domain)
{
    Expr xd = diff(x), zd = diff(z);
    for (double t : linspace(domain.lo, domain.hi, kCheckSamples)) {
        double speed = std::hypot(xd.eval(t), zd.eval(t));
        if (speed <= kZero)
            throw validation_error("singular-curve-needs-explicit-nu",
                                   "curve is singular at t = " + std::to_string(t) +
                                       "; an explicit normal is required",
                                   {t});
    }
    Expr speed = sqrt(xd * xd + zd * zd);
    LegendreCurve c(NuSource::Auto, x, z, zd / speed, -xd / speed, std::nullopt, domain);
    c.validate();
    return c;
}

LegendreCurve LegendreCurve::with_normal(Expr x, Expr z, Expr a, Expr b, Interval domain)
{
    LegendreCurve c(NuSource::Explicit, std::move(x), std::move(z), std::move(a), std::move(b), std::nullopt, domain);
    c.validate();
    return c;
}

LegendreCurve LegendreCurve::with_angle(Expr x, Expr z, Expr phi, Interval domain)
{
    Expr a = cos(phi), b = sin(phi);
    LegendreCurve c(NuSource::Angle, std::move(x), std::move(z), a, b, phi, domain);
    c.validate();
    return c;
}

void LegendreCurve::validate()
{
    std::vector<double> ts = sample_ts(kCheckSamples);
    double worst_unit = 0.0, worst_unit_t = ts[0];
    double worst_tan = 0.0, worst_tan_t = ts[0];
    std::vector<std::pair<double, double>> dirs;
    dirs.reserve(ts.size());
    for (double t : ts) {
        Vec2 n = nu(t);
        Vec2 gd = gamma_dot(t);
        double u = std::fabs(n.squaredNorm() - 1.0);
        double tan = std::fabs(gd.dot(n));
        if (u > worst_unit) {
            worst_unit = u;
            worst_unit_t = t;
        }
        if (tan > worst_tan) {
            worst_tan = tan;
            worst_tan_t = t;
        }
        dirs.emplace_back(n.x(), n.y());
    }
    if (worst_unit > 1e-8)
        throw validation_error("legendre-condition-violated",
                               "normal is not unit: worst deviation " + std::to_string(worst_unit) + " at t = " +
                                   std::to_string(worst_unit_t),
                               {worst_unit_t});
    if (worst_tan > 1e-8)
        throw validation_error("legendre-condition-violated",
                               "gamma'.nu = " + std::to_string(worst_tan) + " at t = " + std::to_string(worst_tan_t),
                               {worst_tan_t});
    if (!phi_)
        phi_samples_ = unwrap_angle(ts, dirs);
}

double LegendreCurve::phi(double t) const
{
    if (phi_)
        return phi_->eval(t);
    return phi_samples_(t);
}

Expr LegendreCurve::vertex_function() const { return beta_d_ * ell_ - beta_ * ell_d_; }

Expr LegendreCurve::vertex_quantity() const { return beta_ * diff(ell_d_) - ell_ * diff(beta_d_); }

std::vector<double> singular_points(const LegendreCurve& c, const RootConfig& cfg)
{
    const Expr& beta = c.beta();
    const Expr& beta_d = c.beta_dot();
    return find_roots([&](double t) { return beta.eval(t); }, c.domain().lo, c.domain().hi, cfg,
                      [&](double t) { return beta_d.eval(t); });
}

bool is_front_at(const LegendreCurve& c, double t) { return std::fabs(c.ell(t)) + std::fabs(c.beta(t)) > kZero; }

LegendreCurve parallel_curve(const LegendreCurve& c, double lambda)
{
    Expr lam(lambda);
    Expr x = c.x() + lam * c.a();
    Expr z = c.z() + lam * c.b();
    if (c.phi_expr())
        return LegendreCurve::with_angle(x, z, *c.phi_expr(), c.domain());
    return LegendreCurve::with_normal(x, z, c.a(), c.b(), c.domain());
}

Vec2 evolute(const LegendreCurve& c, double t)
{
    double l = c.ell(t);
    if (std::fabs(l) <= 1e-12)
        throw validation_error("ell-vanishes", "ell vanishes at t = " + std::to_string(t) + "; evolute undefined", {t});
    return c.gamma(t) - (c.beta(t) / l) * c.nu(t);
}

VertexReport vertices(const LegendreCurve& c, const RootConfig& cfg)
{
    VertexReport report;
    Expr v = c.vertex_function();
    Expr vd = diff(v);
    double vmax = 0.0;
    for (double t : c.sample_ts(kCheckSamples))
        vmax = std::max(vmax, std::fabs(v.eval(t)));
    if (vmax <= kZero) {
        report.degenerate_everywhere = true;
        return report;
    }
    Expr q = c.vertex_quantity();
    for (double t : find_roots([&](double s) { return v.eval(s); }, c.domain().lo, c.domain().hi, cfg,
                               [&](double s) { return vd.eval(s); })) {
        bool ordinary = std::fabs(c.ell(t)) > kZero && std::fabs(q.eval(t)) > kZero;
        report.vertices.push_back({t, ordinary});
    }
    return report;
}

} // namespace helico
