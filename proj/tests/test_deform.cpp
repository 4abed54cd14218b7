#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helico/deform.hpp"
#include "support/hausdorff.hpp"
#include "support/profiles.hpp"

using namespace helico;
using namespace helico::testing;

namespace {

const double kLam = -2.0 * std::sqrt(2.0);

std::vector<double> c_grid(int n, double step)
{
    std::vector<double> cs;
    for (int k = 0; k <= n; ++k)
        cs.push_back(step * k);
    return cs;
}

} // namespace

TEST_CASE("c = 0 parallel profile of the parabola is singular at t = -1 and t = 1")
{
    auto H = HelicoidalSurface::build(parabola(), Axis::Z, 0.0);
    Expr phi = substitute(phi_expr(H, kLam), 1, 0.0);
    auto roots = find_roots([&](double t) { return phi.eval(t); }, -1.5, 1.5);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Phi at c = 0 factors through beta + lambda ell")
{
    auto p = parabola();
    auto H = HelicoidalSurface::build(p, Axis::Z, 0.0);
    for (double lam : {-2.0, 0.5, 1.3})
        for (double t : linspace(-1.5, 1.5, 31)) {
            double x = p.x().eval(t), C = p.a().eval(t);
            double expect = x * x * x * (x + lam * C) * (p.beta(t) + lam * p.ell(t));
            CHECK(Phi(H, lam, 0.0, t) == doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("Phi equals minus the focal polynomial times xi cubed")
{
    auto p = ellipse_arc();
    for (double c : {-1.0, 0.7, 2.0}) {
        auto H = HelicoidalSurface::build(p, Axis::Z, c);
        for (double lam : {-0.8, 0.3})
            for (double t : linspace(0.3, 2.7, 13)) {
                auto C = H.curvature_closed_form(t);
                double xi = H.xi(t);
                double expect = -(C.K * lam * lam - 2 * C.H * lam + C.J) * xi * xi * xi;
                CHECK(Phi(H, lam, c, t) == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
            }
    }
}

TEST_CASE("parallel singularity persists for c up to 1.5")
{
    auto H = HelicoidalSurface::build(parabola(), Axis::Z, 0.0);
    auto rep = track_parallel_singularity(H, kLam, 1.0, c_grid(30, 0.05));
    CHECK(rep.parallel.ok());
    REQUIRE(rep.result.complete());
    REQUIRE(rep.result.branch.size() == 31);
    for (std::size_t k = 0; k + 1 < rep.result.branch.size(); ++k)
        CHECK(std::fabs(rep.result.branch[k + 1].second - rep.result.branch[k].second) < 0.1);
    for (double r : rep.residuals)
        CHECK(r <= 1e-8);
    CHECK(rep.result.branch.back().second == doctest::Approx(1.3648).epsilon(1e-3));

    auto sym = track_parallel_singularity(H, kLam, -1.0, c_grid(30, 0.05));
    REQUIRE(sym.result.complete());
}

TEST_CASE("tracked points are singular points of the deformed profile")
{
    auto H = HelicoidalSurface::build(parabola(), Axis::Z, 0.0);
    auto rep = track_parallel_singularity(H, kLam, 1.0, {0.0, 0.4, 0.8});
    REQUIRE(rep.result.complete());
    for (auto [c, t] : rep.result.branch) {
        auto d = [&](double s) { return gamma_lambda_c_at(H, kLam, c, s); };
        Vec2 v = (d(t + 1e-6) - d(t - 1e-6)) / 2e-6;
        Vec2 w = (d(t + 1e-2) - d(t - 1e-2)) / 2e-2;
        CHECK(v.norm() < 1e-3 * (1.0 + w.norm()));
    }
}

TEST_CASE("hypothesis violations are reported but tracking still runs")
{
    auto H = HelicoidalSurface::build(circle_profile({0.5, 2.5}), Axis::Z, 0.0);
    auto rep = track_parallel_singularity(H, -1.0, 1.0, {0.0, 0.1});
    CHECK_FALSE(rep.parallel.ok());
    CHECK_FALSE(rep.parallel.no_vertex);
}

TEST_CASE("c = 0 collapse to the classical parallel curve")
{
    auto p = parabola({-1.0, 1.0});
    auto H = HelicoidalSurface::build(p, Axis::Z, 0.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lam(-0.9, 0.9);
    for (int k = 0; k < 10; ++k) {
        double l = lam(rng);
        auto prof = gamma_lambda_c(H, l, 0.0, 1000);
        REQUIRE(prof.ts.size() == 1000);
        for (std::size_t i = 0; i < prof.ts.size(); ++i) {
            double t = prof.ts[i];
            double sg = p.x().eval(t) > 0 ? 1.0 : -1.0;
            Vec2 expect = p.gamma(t) + sg * l * p.nu(t);
            CHECK(std::fabs(prof.points[i].x() - expect.x()) <= 1e-12);
            CHECK(std::fabs(prof.points[i].y() - expect.y()) <= 1e-12);
        }
    }
}

TEST_CASE("x-axis deformation at c = 0 collapses to the classical parallel curve")
{
    Expr t = T();
    auto p = LegendreCurve::from_tangent(t, Expr(1.0) + t * t / 4.0, {-1.0, 1.0});
    auto H = HelicoidalSurface::build(p, Axis::X, 0.0);
    for (double l : {-0.3, 0.4}) {
        auto prof = gamma_lambda_c(H, l, 0.0, 101);
        for (std::size_t i = 0; i < prof.ts.size(); ++i) {
            double s = prof.ts[i];
            double sg = p.z().eval(s) > 0 ? 1.0 : -1.0;
            Vec2 expect = p.gamma(s) + sg * l * p.nu(s);
            CHECK((prof.points[i] - expect).norm() <= 1e-12);
        }
    }
}

TEST_CASE("umbilic obstruction is rejected")
{
    auto H = HelicoidalSurface::build(circle_profile({0.5, 2.5}), Axis::Z, 0.0);
    CHECK_THROWS_AS(gamma_lambda_c(H, -1.0, 0.3), Error);
}

TEST_CASE("quadrant conversion covers every sign case")
{
    const double c = 0.5, pi = std::numbers::pi;
    auto same = quadrant_point(1.0, 1.0, 0.0, c);
    CHECK(same.rcase == QuadrantCase::SameSign);
    CHECK(same.p.x() == doctest::Approx(std::sqrt(2.0)));
    CHECK(same.p.y() == doctest::Approx(-c * pi / 4));
    auto opp = quadrant_point(-1.0, 1.0, 0.0, c);
    CHECK(opp.rcase == QuadrantCase::OppositeSign);
    CHECK(opp.p.x() == doctest::Approx(std::sqrt(2.0)));
    CHECK(opp.p.y() == doctest::Approx(c * pi / 4 + c * pi));
    auto neg = quadrant_point(1.0, -1.0, 0.0, c);
    CHECK(neg.p.x() == doctest::Approx(-std::sqrt(2.0)));
    auto x1z = quadrant_point(0.0, 2.0, 1.0, c);
    CHECK(x1z.rcase == QuadrantCase::X1Zero);
    CHECK(x1z.p.x() == 2.0);
    CHECK(x1z.p.y() == doctest::Approx(1.0 - c * pi / 2));
    auto x2z = quadrant_point(-3.0, 0.0, 1.0, c);
    CHECK(x2z.rcase == QuadrantCase::X2Zero);
    CHECK(x2z.p.x() == -3.0);
    CHECK(quadrant_point(0.0, 0.0, 4.0, c).rcase == QuadrantCase::Origin);
}

TEST_CASE("quadrant point lies on the orbit of the space point")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        double x1 = u(rng), x2 = u(rng), x3 = u(rng), c = u(rng);
        auto r = quadrant_point(x1, x2, x3, c);
        // Rotating (X, 0, Z) by angle s about z and lifting by c s must reach the point.
        double s = std::atan2(x2, x1) - (r.p.x() < 0 ? std::numbers::pi : 0.0);
        double X = r.p.x();
        double best = 1e9;
        for (int j = -3; j <= 3; ++j) {
            double a = s + 2 * std::numbers::pi * j;
            Vec3 q(X * std::cos(a), X * std::sin(a), r.p.y() + c * a);
            best = std::min(best, (q - Vec3(x1, x2, x3)).norm());
        }
        CHECK(best < 1e-12);
    }
}

TEST_CASE("plus/minus c symmetry of the parallel deformation")
{
    auto H = HelicoidalSurface::build(parabola({-1.0, 1.0}), Axis::Z, 0.0);
    for (double c : {0.5, 1.2}) {
        auto a = gamma_lambda_c(H, 0.4, c, 801);
        auto b = space_to_plane(parallel_space_profile(H.profile(), Axis::Z, 0.4, -c), 801);
        auto ar = space_to_plane(parallel_space_profile(H.profile(), Axis::Z, 0.4, c), 801);
        std::vector<Vec2> img;
        for (auto& q : b.points)
            img.emplace_back(-q.x(), q.y() - (-c) * std::numbers::pi);
        CHECK(hausdorff(ar.points, img) <= 1e-7);
        CHECK(a.points.size() == 801);
    }
}

TEST_CASE("focal profile at c = 0 is the evolute")
{
    auto p = parabola({-1.0, 1.0});
    auto H = HelicoidalSurface::build(p, Axis::Z, 0.0);
    auto d = delta_c(H, {}, {200});
    REQUIRE(d.points.size() == 200);
    double err = 0.0;
    for (std::size_t i = 0; i < d.ts.size(); ++i)
        err = std::max(err, (d.points[i] - evolute(p, d.ts[i])).cwiseAbs().maxCoeff());
    CHECK(err <= 1e-9);
}

TEST_CASE("explicit focal branches at c = 0 give the evolute and the axis point")
{
    auto p = parabola({-1.0, 1.0});
    auto H = HelicoidalSurface::build(p, Axis::Z, 0.0);
    auto minus = focal_space_profile(H, {FocalBranch::Minus});
    CHECK(minus.branch == FocalBranch::Minus);
    auto plus = focal_space_profile(H, {FocalBranch::Plus, true});
    for (double t : {-0.5, 0.2, 0.9}) {
        Vec3 q = plus.at(t);
        CHECK(std::fabs(q.x()) < 1e-9);
    }
}

TEST_CASE("circle with slant 2 gives a quadricusp")
{
    auto H = HelicoidalSurface::build(circle_profile(), Axis::Z, 2.0);
    std::vector<double> all;
    for (FocalBranch b : {FocalBranch::Minus, FocalBranch::Plus}) {
        auto sp = focal_space_profile(H, {b, true});
        auto [X, Z] = lifted_plane_exprs(sp);
        auto cusps = find_cusps(X, Z, sp.domain);
        CHECK(cusps.size() == 2);
        all.insert(all.end(), cusps.begin(), cusps.end());
    }
    CHECK(all.size() == 4);
}

TEST_CASE("focal profile without pole permission rejects vanishing K")
{
    auto H = HelicoidalSurface::build(circle_profile(), Axis::Z, 2.0);
    CHECK_THROWS_AS(focal_space_profile(H, {FocalBranch::Plus}), Error);
}

TEST_CASE("focal singularity tracking from an ordinary vertex")
{
    auto H = HelicoidalSurface::build(parabola({-1.0, 1.0}), Axis::Z, 0.0);
    auto rep = track_focal_singularity(H, 0.0, {0.0, 0.1, 0.2, 0.3});
    CHECK(rep.ordinary_vertex);
    REQUIRE(rep.result.branch.size() >= 1);
    for (double r : rep.residuals)
        CHECK(r <= 1e-8);
}

TEST_CASE("focal tracking on the circle reports the missing vertex")
{
    auto H = HelicoidalSurface::build(circle_profile({0.5, 2.5}), Axis::Z, 0.0);
    auto rep = track_focal_singularity(H, 1.0, {0.0, 0.1});
    CHECK_FALSE(rep.ordinary_vertex);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("focal singularity of the parabola persists on c in [0, 0.5]")
{
    auto H = HelicoidalSurface::build(parabola({-1.0, 1.0}), Axis::Z, 0.0);
    auto rep = track_focal_singularity(H, 0.0, c_grid(10, 0.05));
    REQUIRE(rep.result.complete());
    CHECK(rep.result.branch.size() == 11);
    for (double r : rep.residuals)
        CHECK(r <= 1e-8);
}

TEST_CASE("zero offset returns the original profile")
{
    auto p = ellipse_arc();
    auto sp = parallel_space_profile(p, Axis::Z, 0.0, 1.3);
    for (double t : {0.5, 1.0, 2.0}) {
        Vec3 q = sp.at(t);
        CHECK(q.x() == doctest::Approx(p.x().eval(t)));
        CHECK(q.y() == 0.0);
        CHECK(q.z() == doctest::Approx(p.z().eval(t)));
    }
}

TEST_CASE("Phi has roots near both singular points at unit slant")
{
    auto H = HelicoidalSurface::build(parabola(), Axis::Z, 0.0);
    Expr phi = substitute(phi_expr(H, kLam), 1, 1.0);
    auto roots = find_roots([&](double t) { return phi.eval(t); }, -1.8, 1.8);
    bool near_plus = false, near_minus = false;
    for (double r : roots) {
        near_plus = near_plus || std::fabs(r - 1.0) < 0.3;
        near_minus = near_minus || std::fabs(r + 1.0) < 0.3;
    }
    CHECK(near_plus);
    CHECK(near_minus);
}

TEST_CASE("second focal profile at c = 0 lies on the axis and needs a flag")
{
    auto H = HelicoidalSurface::build(parabola({0.2, 1.0}), Axis::Z, 0.0);
    FocalOptions plus{FocalBranch::Plus};
    CHECK_THROWS_AS(delta_c(H, plus), Error);
    auto d = delta_c(H, plus, {51, false, true});
    REQUIRE(d.points.size() == 51);
    for (const auto& q : d.points)
        CHECK(std::fabs(q.x()) < 1e-9);
}

TEST_CASE("swept space profile reproduces the parallel surface")
{
    auto H = HelicoidalSurface::build(ellipse_arc(), Axis::Z, -0.7);
    auto sp = parallel_space_profile(H, 0.25);
    for (double t : {0.4, 1.9})
        for (double th : {0.0, 2.5}) {
            Vec3 expect = H.position(t, th) + 0.25 * H.frame(t, th).n;
            CHECK((sp.surface_point(t, th) - expect).norm() < 1e-12);
        }
}
