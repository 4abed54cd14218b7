#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helico/legendre.hpp"
#include "support/profiles.hpp"

using namespace helico;
using namespace helico::testing;

namespace {

void check_frame_equations(const LegendreCurve& c)
{
    for (double t : c.sample_ts(1000)) {
        Vec2 r1 = c.gamma_dot(t) - c.beta(t) * c.mu(t);
        Vec2 r2 = c.nu_dot(t) - c.ell(t) * c.mu(t);
        CHECK(r1.cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(r2.cwiseAbs().maxCoeff() <= 1e-8);
    }
}

} // namespace

TEST_CASE("parabola frame")
{
    auto c = parabola();
    for (double t : {-1.0, 0.0, 0.5}) {
        double w = std::sqrt(1 + t * t);
        CHECK(c.nu(t).x() == doctest::Approx(t / w));
        CHECK(c.nu(t).y() == doctest::Approx(-1 / w));
        CHECK(c.beta(t) == doctest::Approx(w));
        CHECK(c.ell(t) == doctest::Approx(1 / (1 + t * t)));
    }
    check_frame_equations(c);
}

TEST_CASE("circle frame")
{
    auto c = circle_profile();
    for (double t : {0.0, 1.0, 4.0}) {
        CHECK(c.beta(t) == doctest::Approx(1.0));
        CHECK(c.ell(t) == doctest::Approx(1.0));
        CHECK(c.nu(t).x() == doctest::Approx(std::sin(t)));
        CHECK(c.nu(t).y() == doctest::Approx(-std::cos(t)));
        Vec2 e = evolute(c, t);
        CHECK(e.x() == doctest::Approx(0.0).scale(1.0));
        CHECK(e.y() == doctest::Approx(2.0));
    }
    check_frame_equations(c);
}

TEST_CASE("frontal through the origin")
{
    auto c = wavy_frontal();
    for (double t : {-0.8, -0.1, 0.3, 0.9})
        CHECK(std::fabs(c.beta(t)) == doctest::Approx(std::fabs(t)));
    CHECK(std::fabs(c.ell(0.0)) == doctest::Approx(1.0));
    CHECK(c.gamma(0.0).norm() < 1e-15);
    auto s = singular_points(c);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(is_front_at(c, 0.0));
    check_frame_equations(c);
}

TEST_CASE("cusp profile singular set")
{
    auto c = cusp_profile();
    auto s = singular_points(c);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(c.beta(0.5) == doctest::Approx(0.5 * std::sqrt(1.25)));
    check_frame_equations(c);
}

TEST_CASE("auto frame needs a regular curve")
{
    Expr t = T();
    CHECK_THROWS_WITH_AS(LegendreCurve::from_tangent(t * t, t * t * t, {-1, 1}), doctest::Contains("singular"), Error);
}

TEST_CASE("explicit normal must be tangent-orthogonal and unit")
{
    Expr t = T();
    try {
        LegendreCurve::with_normal(t, t * t, Expr(1.0), Expr(0.0), {-1, 1});
        FAIL("expected a violation");
    } catch (const Error& e) {
        CHECK(e.code() == "legendre-condition-violated");
        REQUIRE(e.where().size() == 1);
    }
    CHECK_THROWS_AS(LegendreCurve::with_normal(t, Expr(0.0), Expr(0.0), Expr(-2.0), {-1, 1}), Error);
}

TEST_CASE("a frontal that is not a front")
{
    // gamma' = t^3 (cos phi', sin phi') with nu turning at speed t: beta = t^3, ell = t.
    Expr t = T();
    Expr phi = t * t / 2.0;
    // Integrate t^3 (-sin phi, cos phi) in closed form via u = t^2 / 2: t^3 dt = 2 u du.
    Expr u = phi;
    Expr x = Expr(-2.0) * (sin(u) - u * cos(u));
    Expr z = Expr(2.0) * (cos(u) + u * sin(u));
    auto c = LegendreCurve::with_angle(x, z, phi, {-1, 1});
    CHECK(c.beta(0.5) == doctest::Approx(0.125));
    CHECK(c.ell(0.5) == doctest::Approx(0.5));
    CHECK_FALSE(is_front_at(c, 0.0));
    CHECK(is_front_at(c, 0.5));
}

TEST_CASE("parallel curve shifts beta by lambda ell")
{
    auto c = parabola();
    for (double lam : {-2.0, 0.3}) {
        auto p = parallel_curve(c, lam);
        for (double t : c.sample_ts(101)) {
            CHECK(p.beta(t) == doctest::Approx(c.beta(t) + lam * c.ell(t)).epsilon(1e-10));
            CHECK(p.ell(t) == doctest::Approx(c.ell(t)).epsilon(1e-10));
        }
    }
    auto same = parallel_curve(c, 0.0);
    CHECK((same.gamma(0.7) - c.gamma(0.7)).norm() == 0.0);
}

TEST_CASE("parallel curve singular exactly where lambda = -beta/ell")
{
    auto c = parabola();
    const double lam = -2.0 * std::sqrt(2.0);
    auto s = singular_points(parallel_curve(c, lam));
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-8));
    for (double t : s)
        CHECK(-c.beta(t) / c.ell(t) == doctest::Approx(lam));
}

TEST_CASE("circle offset by its radius collapses to the centre")
{
    auto p = parallel_curve(circle_profile(), -1.0);
    for (double t : {0.0, 2.0, 5.0}) {
        CHECK((p.gamma(t) - Vec2(0.0, 2.0)).norm() < 1e-14);
        CHECK(std::fabs(p.beta(t)) < 1e-14);
    }
}

TEST_CASE("ell equals beta times classical curvature")
{
    for (const auto& np : test_profiles()) {
        const auto& c = np.curve;
        Expr xd = diff(c.x()), zd = diff(c.z());
        Expr xdd = diff(xd), zdd = diff(zd);
        for (double t : c.sample_ts(200)) {
            double sp = std::hypot(xd.eval(t), zd.eval(t));
            if (sp < 1e-3)
                continue;
            double kappa = (xd.eval(t) * zdd.eval(t) - zd.eval(t) * xdd.eval(t)) / (sp * sp * sp);
            CHECK(std::fabs(c.ell(t)) == doctest::Approx(std::fabs(c.beta(t)) * std::fabs(kappa)).epsilon(1e-7));
        }
    }
}

TEST_CASE("parabola evolute")
{
    auto c = parabola();
    Vec2 e = evolute(c, 0.0);
    CHECK(e.x() == doctest::Approx(2.0));
    CHECK(e.y() == doctest::Approx(1.0));
    // Classical centre of curvature of (t + 2, t^2 / 2).
    for (double t : {-1.0, 0.4, 1.2}) {
        Vec2 n(-t, 1.0);
        n /= n.norm();
        double kappa = 1.0 / std::pow(1 + t * t, 1.5);
        Vec2 expect = c.gamma(t) + n / kappa;
        CHECK((evolute(c, t) - expect).norm() < 1e-12);
    }
}

TEST_CASE("evolute needs nonzero ell")
{
    Expr t = T();
    auto line = LegendreCurve::from_tangent(t + 1.0, t, {0, 1});
    try {
        evolute(line, 0.5);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "ell-vanishes");
    }
}

TEST_CASE("vertices")
{
    auto r = vertices(parabola());
    CHECK_FALSE(r.degenerate_everywhere);
    REQUIRE(r.vertices.size() == 1);
    CHECK(r.vertices[0].t == doctest::Approx(0.0).scale(1.0));
    CHECK(r.vertices[0].ordinary);

    CHECK(vertices(circle_profile()).degenerate_everywhere);

    Expr t = T();
    Expr w = sqrt(Expr(1.0) + Expr(16.0) * pow(t, Expr(6.0)));
    auto quartic = LegendreCurve::with_normal(t, pow(t, Expr(4.0)), Expr(4.0) * pow(t, Expr(3.0)) / w, Expr(-1.0) / w,
                                              {-1, 1});
    auto q = vertices(quartic);
    bool found = false;
    for (auto& v : q.vertices)
        if (std::fabs(v.t) < 1e-6) {
            found = true;
            CHECK_FALSE(v.ordinary);
        }
    CHECK(found);
}
