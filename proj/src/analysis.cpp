#include "helico/analysis.hpp"

#include <cmath>

#include "helico/deform.hpp"
#include "helico/errors.hpp"
#include "helico/numerics.hpp"

namespace helico {

namespace {

constexpr double kZero = 1e-10;
constexpr int kOrderCap = 8;

bool zero(double v) { return std::fabs(v) <= kZero; }

bool phi_at_least(const SingularPointProfile& p, int n) { return !p.phi_order || *p.phi_order >= n; }

} // namespace

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Bounded:
        return "bounded";
    case Verdict::Unbounded:
        return "unbounded";
    default:
        return "inconclusive";
    }
}

SingularPointProfile profile_at_singularity(const HelicoidalSurface& H, double t0)
{
    LegendreCurve p = adapted_profile(H);
    const Interval& dom = p.domain();
    std::optional<int> m = vanishing_order(p.beta(), t0, kOrderCap);
    if (!m)
        throw validation_error("order-exceeds-cap", "beta vanishes beyond order 8 at t0", {t0});
    if (*m == 0)
        throw validation_error("not-singular", "beta does not vanish at t0", {t0});

    double w = 0.05 * dom.width();
    Expr beta = p.beta();
    for (double r : find_roots([&](double t) { return beta.eval(t); }, std::max(dom.lo, t0 - w),
                               std::min(dom.hi, t0 + w)))
        if (std::fabs(r - t0) > 1e-4)
            throw validation_error("not-isolated", "another singular point lies near t0", {t0, r});

    SingularPointProfile s;
    s.t0 = t0;
    s.m = *m;
    s.degenerate = *m > 1;
    s.is_front = !zero(p.ell(t0));
    s.x0 = p.x().eval(t0);
    s.cos_phi0 = p.a().eval(t0);
    s.slant = H.slant();
    std::optional<int> lo = vanishing_order(p.ell(), t0, kOrderCap);
    if (lo)
        s.phi_order = *lo + 1;
    return s;
}

Classification classify_K(const SingularPointProfile& p)
{
    const bool x_zero = zero(p.x0), c_zero = zero(p.cos_phi0);
    if (p.m == 1) {
        if (p.is_front) {
            if (x_zero || c_zero)
                return {Verdict::Bounded, "K: m = 1, front, x(0) cos phi(0) = 0"};
            return {Verdict::Unbounded, "K: m = 1, front, x(0) cos phi(0) != 0"};
        }
        return {Verdict::Bounded, "K: m = 1, not a front"};
    }
    if (p.is_front) {
        if (x_zero)
            return {Verdict::Bounded, "K: m > 1, front, x(0) = 0"};
        return {Verdict::Unbounded, "K: m > 1, front, x(0) != 0"};
    }
    if (x_zero)
        return {Verdict::Bounded, "K: m > 1, not a front, x(0) = 0"};
    if (!c_zero) {
        if (phi_at_least(p, p.m + 1))
            return {Verdict::Bounded, "K: m > 1, not a front, x cos phi != 0, phi = O(t^(m+1))"};
        return {Verdict::Unbounded, "K: m > 1, not a front, x cos phi != 0, phi not O(t^(m+1))"};
    }
    int need = (p.m + 2) / 2;
    if (phi_at_least(p, need))
        return {Verdict::Bounded, "K: m > 1, not a front, x(0) != 0, cos phi(0) = 0, phi = O(t^ceil((m+1)/2))"};
    return {Verdict::Unbounded, "K: m > 1, not a front, x(0) != 0, cos phi(0) = 0, phi not O(t^ceil((m+1)/2))"};
}

Classification classify_H(const SingularPointProfile& p)
{
    const bool x_zero = zero(p.x0);
    if (p.is_front) {
        if (x_zero)
            return {Verdict::Bounded, "H: front, x(0) = 0"};
        return {Verdict::Unbounded, "H: front, x(0) != 0"};
    }
    if (x_zero)
        return {Verdict::Bounded, "H: not a front, x(0) = 0"};
    if (phi_at_least(p, p.m + 1))
        return {Verdict::Bounded, "H: not a front, x(0) != 0, phi = O(t^(m+1))"};
    return {Verdict::Unbounded, "H: not a front, x(0) != 0, phi not O(t^(m+1))"};
}

ProbeResult boundedness_probe(const HelicoidalSurface& H, double t0, Quantity which)
{
    const HelicoidForms& f = H.forms();
    const Expr& num = which == Quantity::K ? f.K : f.H;
    auto value = [&](double t) -> double {
        auto n = num.try_eval(t);
        auto j = f.J.try_eval(t);
        if (!n || !j || *j == 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        return std::fabs(*n / *j);
    };

    ProbeResult r;
    std::vector<double> lx, ly;
    for (int k = 2; k <= 8; ++k) {
        double h = std::pow(10.0, -k);
        ProbeSample s{h, value(t0 - h), value(t0 + h)};
        r.samples.push_back(s);
        double v = std::max(std::isfinite(s.left) ? s.left : 0.0, std::isfinite(s.right) ? s.right : 0.0);
        if (v > 0.0) {
            lx.push_back(std::log10(h));
            ly.push_back(std::log10(v));
        }
    }
    if (lx.size() < 3)
        return r;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    r.slope = sxy / sxx;
    bool growing = true;
    for (std::size_t i = 1; i < ly.size(); ++i)
        if (ly[i] < ly[i - 1])
            growing = false;
    if (r.slope < -0.1 && growing)
        r.verdict = Verdict::Unbounded;
    else if (r.slope >= -0.1)
        r.verdict = Verdict::Bounded;
    return r;
}

} // namespace helico
