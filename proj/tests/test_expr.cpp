#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "helico/expr.hpp"
#include "helico/numerics.hpp"

using namespace helico;

TEST_CASE("parse and evaluate basic expressions")
{
    CHECK(parse("t^2/2").eval(2.0) == doctest::Approx(2.0));
    CHECK(parse("sin(t)*cos(t)").eval(0.0) == 0.0);
    CHECK(parse("t+2").eval(0.0) == 2.0);
    CHECK(parse("atan2(-1, t)").eval(1.0) == doctest::Approx(-std::numbers::pi / 4));
    CHECK(parse("pi").eval(0.0) == doctest::Approx(std::numbers::pi));
    CHECK(parse("e^t").eval(1.0) == doctest::Approx(std::numbers::e));
}

TEST_CASE("precedence: power is right-associative and binds tighter than unary minus")
{
    CHECK(parse("-t^2").eval(3.0) == doctest::Approx(-9.0));
    CHECK(parse("2^3^2").eval(0.0) == doctest::Approx(512.0));
    CHECK(parse("2^-1").eval(0.0) == doctest::Approx(0.5));
    CHECK(parse("1-2-3").eval(0.0) == doctest::Approx(-4.0));
    CHECK(parse("8/4/2").eval(0.0) == doctest::Approx(1.0));
    CHECK(parse("-2*t+1").eval(1.0) == doctest::Approx(-1.0));
}

TEST_CASE("syntax errors carry offset and expected tokens")
{
    try {
        parse("(t+1");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
        REQUIRE(e.expected().size() == 1);
        CHECK(e.expected()[0] == ")");
    }
    CHECK_THROWS_AS(parse("t +"), ParseError);
    CHECK_THROWS_AS(parse("atan2(t)"), ParseError);
    CHECK_THROWS_AS(parse("t $ 2"), ParseError);
    CHECK_THROWS_AS(parse("t t"), ParseError);
}

TEST_CASE("unknown identifiers are reported")
{
    try {
        parse("1 + foo(t)");
        FAIL("expected unknown identifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "foo");
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("theta"), UnknownIdentifier);
    CHECK(parse("theta + t", {"t", "theta"}).eval(1.0, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("domain errors name the offending subexpression")
{
    try {
        parse("1 + sqrt(t)").eval(-1.0);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.subexpression() == "sqrt(t)");
    }
    CHECK_THROWS_AS(parse("1/t").eval(0.0), DomainError);
    CHECK_THROWS_AS(parse("log(t)").eval(0.0), DomainError);
    CHECK_THROWS_AS(parse("t^0.5").eval(-2.0), DomainError);
    CHECK(parse("t^3").eval(-2.0) == doctest::Approx(-8.0));
    CHECK_FALSE(parse("log(t)").try_eval(-1.0).has_value());
}

TEST_CASE("symbolic derivatives")
{
    CHECK(diff(parse("sin(t)")).eval(0.0) == doctest::Approx(1.0));
    CHECK(diff(diff(parse("t^3/3"))).eval(1.0) == doctest::Approx(2.0));
    Expr da = diff(parse("atan(t)"));
    double fd = derivative([](double t) { return std::atan(t); }, 0.0, 1);
    CHECK(std::fabs(da.eval(0.0) - 1.0) < 1e-15);
    CHECK(std::fabs(da.eval(0.0) - fd) < 1e-9);
    Expr d2 = diff(parse("atan2(t^2 + 1, cos(t) + 2)"));
    auto f = [](double t) { return std::atan2(t * t + 1, std::cos(t) + 2); };
    CHECK(std::fabs(d2.eval(0.7) - derivative(f, 0.7, 1)) < 1e-9);
    CHECK(diff(parse("t^2 * theta", {"t", "theta"}), 1).eval(3.0, 5.0) == doctest::Approx(9.0));
}

TEST_CASE("abs and sign are flagged as non-smooth")
{
    auto args = nonsmooth_arguments(diff(parse("abs(t - 1) + t")));
    REQUIRE(args.size() == 1);
    CHECK(args[0].eval(1.0) == 0.0);
    CHECK(nonsmooth_arguments(parse("sin(t)")).empty());
}

TEST_CASE("substitution")
{
    Expr e = parse("t^2 + c", {"t", "c"});
    Expr s = substitute(e, 1, Expr(3.0));
    CHECK(s.eval(2.0) == doctest::Approx(7.0));
    CHECK(max_variable(s) == 0);
}

namespace {

Expr random_expr(std::mt19937_64& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 14);
    std::uniform_real_distribution<double> lit(-2.0, 2.0);
    Expr t = Expr::variable(0);
    switch (pick(rng)) {
    case 0: return t;
    case 1: return Expr(std::round(lit(rng) * 100.0) / 100.0);
    case 2: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 5: {
        Expr d = random_expr(rng, depth - 1);
        return random_expr(rng, depth - 1) / (Expr(1.0) + d * d);
    }
    case 6: return pow(random_expr(rng, depth - 1), Expr(2.0 + (rng() % 2)));
    case 7: return sin(random_expr(rng, depth - 1));
    case 8: return cos(random_expr(rng, depth - 1));
    case 9: return atan(random_expr(rng, depth - 1));
    case 10: return exp(sin(random_expr(rng, depth - 1)));
    case 11: {
        Expr u = random_expr(rng, depth - 1);
        return sqrt(Expr(1.0) + u * u);
    }
    case 12: return log(Expr(2.0) + sin(random_expr(rng, depth - 1)));
    case 13: return atan2(random_expr(rng, depth - 1), Expr(2.0) + cos(random_expr(rng, depth - 1)));
    default: return -random_expr(rng, depth - 1);
    }
}

} // namespace

TEST_CASE("property: diff agrees with finite differences on random expressions")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ts(-1.5, 1.5);
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        Expr e = random_expr(rng, 6);
        Expr d = diff(e);
        for (int j = 0; j < 10; ++j) {
            double t = ts(rng);
            double exact = d.eval(t);
            double fd = derivative([&](double s) { return e.eval(s); }, t, 1);
            CHECK_MESSAGE(std::fabs(exact - fd) <= 1e-6 * (1.0 + std::fabs(exact)), print(e));
            ++checked;
        }
    }
    CHECK(checked == 1000);
}

TEST_CASE("property: print then parse round-trips evaluation")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ts(-1.5, 1.5);
    for (int k = 0; k < 100; ++k) {
        Expr e = random_expr(rng, 6);
        Expr back = parse(print(e));
        for (int j = 0; j < 10; ++j) {
            double t = ts(rng);
            CHECK_MESSAGE(back.eval(t) == doctest::Approx(e.eval(t)).epsilon(1e-14), print(e));
        }
    }
    for (const char* s : {"-t^2", "(-2)^2*t", "t - -3", "atan2(t, 1 - t)/-t", "2^3^t", "e*pi - t/(t+1)"}) {
        Expr e = parse(s);
        CHECK(parse(print(e)).eval(0.3) == doctest::Approx(e.eval(0.3)));
    }
}

TEST_CASE("concurrent evaluation of a shared expression")
{
    Expr e = diff(parse("sin(t)^3 * exp(t) / (1 + t^2)"));
    std::vector<double> results(4);
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i)
        threads.emplace_back([&, i] {
            double s = 0.0;
            for (int k = 0; k < 1000; ++k)
                s += e.eval(0.001 * k);
            results[i] = s;
        });
    for (auto& th : threads)
        th.join();
    for (double r : results)
        CHECK(r == results[0]);
}
