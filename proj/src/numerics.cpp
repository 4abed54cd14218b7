#include "helico/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace helico {

void RootConfig::validate() const
{
    if (!(abs_tol > 0.0) || !(step_tol > 0.0) || max_iter < 1 || bracket_samples < 2)
        throw validation_error("invalid-config", "root finder tolerances must be positive and max_iter >= 1");
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> out(static_cast<std::size_t>(std::max(n, 1)));
    if (n <= 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

namespace {

double central(const ScalarFn& f, double t, double h, int order)
{
    switch (order) {
    case 1: return (f(t + h) - f(t - h)) / (2.0 * h);
    case 2: return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
    default: return (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h)) / (2.0 * h * h * h);
    }
}

} // namespace

double derivative(const ScalarFn& f, double t, int order)
{
    if (order < 1 || order > 3)
        throw validation_error("invalid-order", "derivative order must be 1, 2 or 3");
    static constexpr double base[] = {0.0, 1e-5, 1e-3, 1e-2};
    double h = base[order] * (1.0 + std::fabs(t));
    double d1 = central(f, t, h, order);
    double d2 = central(f, t, 0.5 * h, order);
    return (4.0 * d2 - d1) / 3.0;
}

double solve_bracketed(const ScalarFn& f, double lo, double hi, const RootConfig& cfg, const ScalarFn& df)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    // Orient so that f(a) < 0 < f(b).
    double a = lo, b = hi;
    if (flo > 0.0)
        std::swap(a, b);
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < cfg.max_iter; ++it) {
        double ft = f(t);
        if (ft == 0.0)
            return t;
        if (ft < 0.0)
            a = t;
        else
            b = t;
        double d = df ? df(t) : derivative(f, t, 1);
        double tn = t - ft / d;
        double left = std::min(a, b), right = std::max(a, b);
        if (!std::isfinite(tn) || tn <= left || tn >= right)
            tn = 0.5 * (a + b);
        if (std::fabs(tn - t) < cfg.step_tol || right - left < cfg.step_tol)
            return tn;
        t = tn;
    }
    return t;
}

std::vector<double> find_roots(const ScalarFn& f, double lo, double hi, const RootConfig& cfg, const ScalarFn& df)
{
    cfg.validate();
    if (hi < lo)
        std::swap(lo, hi);
    const int n = cfg.bracket_samples;
    std::vector<double> ts = linspace(lo, hi, n);
    std::vector<double> vs(ts.size());
    double fmax = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        vs[i] = f(ts[i]);
        if (std::isfinite(vs[i]))
            fmax = std::max(fmax, std::fabs(vs[i]));
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!std::isfinite(vs[i]))
            continue;
        if (vs[i] == 0.0) {
            roots.push_back(ts[i]);
            continue;
        }
        if (i + 1 < ts.size() && std::isfinite(vs[i + 1]) && vs[i + 1] != 0.0 && (vs[i] < 0.0) != (vs[i + 1] < 0.0))
            roots.push_back(solve_bracketed(f, ts[i], ts[i + 1], cfg, df));
    }
    // Even-multiplicity roots: local minima of |f| that touch zero.
    const double touch_tol = cfg.abs_tol * (1.0 + fmax);
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        double l = vs[i - 1], m = vs[i], r = vs[i + 1];
        if (!std::isfinite(l) || !std::isfinite(m) || !std::isfinite(r) || m == 0.0)
            continue;
        if (std::fabs(m) > std::fabs(l) || std::fabs(m) > std::fabs(r))
            continue;
        if ((l < 0.0) != (m < 0.0) || (r < 0.0) != (m < 0.0))
            continue;
        double a = ts[i - 1], b = ts[i + 1];
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = std::fabs(f(x1)), f2 = std::fabs(f(x2));
        for (int it = 0; it < 200 && b - a > cfg.step_tol * 1e-2; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = std::fabs(f(x1));
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = std::fabs(f(x2));
            }
        }
        double tm = 0.5 * (a + b);
        double fm = std::fabs(f(tm));
        if (std::isfinite(fm) && fm <= touch_tol)
            roots.push_back(tm);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() && r - merged.back() < 10.0 * cfg.step_tol)
            continue;
        merged.push_back(r);
    }
    return merged;
}

namespace {

double dF_dt(const BivariateFn& F, const BivariateFn& dFdt, double c, double t)
{
    if (dFdt)
        return dFdt(c, t);
    return derivative([&](double s) { return F(c, s); }, t, 1);
}

std::optional<double> newton_in_t(const BivariateFn& F, const BivariateFn& dFdt, double c, double t,
                                  const RootConfig& cfg, double max_move, double origin)
{
    for (int it = 0; it < cfg.max_iter; ++it) {
        double f = F(c, t);
        double d = dF_dt(F, dFdt, c, t);
        if (!std::isfinite(f) || !std::isfinite(d) || d == 0.0)
            return std::nullopt;
        double step = f / d;
        t -= step;
        if (!std::isfinite(t) || std::fabs(t - origin) > max_move)
            return std::nullopt;
        if (std::fabs(step) < cfg.step_tol) {
            // One more step lands the residual at rounding level.
            double f2 = F(c, t), d2 = dF_dt(F, dFdt, c, t);
            if (std::isfinite(f2) && std::isfinite(d2) && d2 != 0.0)
                t -= f2 / d2;
            return t;
        }
    }
    return std::nullopt;
}

} // namespace

ContinuationResult continue_root(const BivariateFn& F, double t0, const std::vector<double>& c_grid,
                                 const RootConfig& cfg, const BivariateFn& dFdt)
{
    cfg.validate();
    ContinuationResult out;
    if (c_grid.empty())
        return out;
    const double c0 = c_grid.front();
    const double f0 = F(c0, t0);
    if (!(std::fabs(f0) <= cfg.abs_tol * 100.0))
        throw numeric_error("seed-not-a-root",
                            "seed is not a root: |F(c0, t0)| = " + std::to_string(std::fabs(f0)), {t0});
    out.branch.emplace_back(c0, t0);
    const double d0 = dF_dt(F, dFdt, c0, t0);
    if (!(std::fabs(d0) > 1e-10)) {
        out.status = ContinuationStatus::Fold;
        out.message = "dF/dt vanishes at the seed; possible fold";
        return out;
    }
    for (std::size_t k = 1; k < c_grid.size(); ++k) {
        const double c = c_grid[k];
        const auto [c_prev, t_prev] = out.branch.back();
        double t_pred = t_prev;
        if (out.branch.size() >= 2) {
            const auto [c_pp, t_pp] = out.branch[out.branch.size() - 2];
            if (c_prev != c_pp)
                t_pred = t_prev + (t_prev - t_pp) / (c_prev - c_pp) * (c - c_prev);
        } else {
            double dc = 1e-6 * (1.0 + std::fabs(c_prev));
            double fc = (F(c_prev + dc, t_prev) - F(c_prev - dc, t_prev)) / (2.0 * dc);
            double ft = dF_dt(F, dFdt, c_prev, t_prev);
            if (std::isfinite(fc) && std::isfinite(ft) && ft != 0.0)
                t_pred = t_prev - fc / ft * (c - c_prev);
        }
        const double move = std::fabs(t_pred - t_prev);
        const double radius = std::max(0.1 * (1.0 + std::fabs(t_prev)), 5.0 * move);
        std::optional<double> t = newton_in_t(F, dFdt, c, t_pred, cfg, radius, t_prev);
        if (!t) {
            // Bracket search outward from the predictor.
            const double w = std::max(move, 1e-3 * (1.0 + std::fabs(t_prev)));
            double fp = F(c, t_pred);
            if (std::isfinite(fp) && fp == 0.0)
                t = t_pred;
            for (int j = 1; !t && j * w <= radius; ++j) {
                for (double sgn : {1.0, -1.0}) {
                    double a = t_pred + sgn * (j - 1) * w, b = t_pred + sgn * j * w;
                    double fa = F(c, a), fb = F(c, b);
                    if (std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0)) {
                        t = solve_bracketed([&](double s) { return F(c, s); }, std::min(a, b), std::max(a, b), cfg,
                                            dFdt ? ScalarFn([&](double s) { return dFdt(c, s); }) : ScalarFn());
                        break;
                    }
                }
            }
        }
        if (!t) {
            out.status = ContinuationStatus::Fold;
            out.message = "no root near t = " + std::to_string(t_prev) + " at c = " + std::to_string(c) +
                          "; possible fold";
            return out;
        }
        out.branch.emplace_back(c, *t);
    }
    return out;
}

AngleFunction::AngleFunction(std::vector<double> ts, std::vector<double> phis)
    : ts_(std::move(ts)), phis_(std::move(phis))
{
    if (ts_.size() != phis_.size() || ts_.empty())
        throw validation_error("invalid-argument", "angle function needs matching non-empty samples");
}

double AngleFunction::operator()(double t) const
{
    const std::size_t n = ts_.size();
    if (n == 1)
        return phis_[0];
    std::size_t i = static_cast<std::size_t>(std::upper_bound(ts_.begin(), ts_.end(), t) - ts_.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1);
    // Four nodes around [ts[i-1], ts[i]], clamped at the ends.
    std::size_t lo = i >= 2 ? i - 2 : 0;
    std::size_t hi = std::min(n - 1, lo + 3);
    lo = hi >= 3 ? hi - 3 : 0;
    double r = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
        double w = 1.0;
        for (std::size_t k = lo; k <= hi; ++k)
            if (k != j)
                w *= (t - ts_[k]) / (ts_[j] - ts_[k]);
        r += w * phis_[j];
    }
    return r;
}

AngleFunction unwrap_angle(const std::vector<double>& ts, const std::vector<std::pair<double, double>>& directions)
{
    if (ts.size() != directions.size() || ts.empty())
        throw validation_error("invalid-argument", "unwrap_angle needs matching non-empty samples");
    std::vector<double> phis(ts.size());
    phis[0] = std::atan2(directions[0].second, directions[0].first);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        double raw = std::atan2(directions[i].second, directions[i].first);
        double d = std::remainder(raw - phis[i - 1], 2.0 * std::numbers::pi);
        if (std::fabs(d) >= std::numbers::pi / 2)
            throw numeric_error("grid-too-coarse",
                                "angle jumps by " + std::to_string(d) + " between consecutive samples",
                                {ts[i - 1], ts[i]});
        // Snap to raw + 2k*pi so the node differs from atan2 by an exact multiple.
        double k = std::round((phis[i - 1] + d - raw) / (2.0 * std::numbers::pi));
        phis[i] = raw + 2.0 * std::numbers::pi * k;
    }
    return AngleFunction(ts, std::move(phis));
}

std::optional<int> vanishing_order(const Expr& f, double t0, int m_max)
{
    if (m_max < 0 || m_max > 8)
        throw validation_error("order-exceeds-cap", "vanishing order cap must lie in 0..8");
    Expr d = f;
    double lower = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        if (m > 0)
            d = diff(d, 0);
        double v = std::fabs(d.eval(t0));
        if (v > 1e-8 * (1.0 + lower))
            return m;
        lower = std::max(lower, v);
    }
    return std::nullopt;
}

} // namespace helico
