#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "chernlab/errors.hpp"
#include "chernlab/expr.hpp"
#include "oracles.hpp"

using namespace chernlab;

TEST_SUITE("expr-jet") {

TEST_CASE("Poincare conformal factor parses and is 4 at the origin") {
    const Expr e = Expr::parse("4/(1-u^2-v^2)^2");
    CHECK(e.eval(0.0, 0.0) == 4.0);
}

TEST_CASE("sin(u)*sin(u) equals sin^2 u") {
    const Expr e = Expr::parse("sin(u)*sin(u)");
    for (double u : {-2.0, -0.3, 0.0, 0.7, 1.9}) CHECK(e.eval(u, 0.4) == doctest::Approx(std::sin(u) * std::sin(u)).epsilon(1e-15));
}

TEST_CASE("incomplete input is rejected at offset 3") {
    try {
        Expr::parse("u +");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }
}

TEST_CASE("malformed inputs carry their offsets") {
    struct Case {
        const char* text;
        std::size_t offset;
    };
    for (const Case c : {Case{"", 0}, Case{"(u", 2}, Case{"u)", 1}, Case{"foo(u)", 0}, Case{"2*w", 2},
                         Case{"sin u", 4}, Case{"u ** v", 3}, Case{"1.2.3", 3}, Case{"sin()", 4}}) {
        CAPTURE(c.text);
        try {
            Expr::parse(c.text);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.offset() == c.offset);
        }
    }
}

TEST_CASE("bilinear jet") {
    const Jet2 j = Expr::parse("u*v").eval_jet(2.0, 3.0);
    CHECK(j.val == 6.0);
    CHECK(j.d_u == 3.0);
    CHECK(j.d_v == 2.0);
    CHECK(j.d_uv == 1.0);
    CHECK(j.d_uu == 0.0);
    CHECK(j.d_vv == 0.0);
}

TEST_CASE("monomial jet") {
    const Jet2 j = Expr::parse("u^2").eval_jet(3.0, 0.0);
    CHECK(j.d_u == 6.0);
    CHECK(j.d_uu == 2.0);
}

TEST_CASE("exp(sin(u)) matches central differences") {
    const Expr e = Expr::parse("exp(sin(u))");
    const Jet2 j = e.eval_jet(0.7, 0.0);
    const auto fd = oracle::central_differences([&](double u, double v) { return e.eval(u, v); }, 0.7, 0.0);
    CHECK(oracle::rel_err(j.d_u, fd.d_u) < 1e-6);
    CHECK(oracle::rel_err(j.d_uu, fd.d_uu) < 1e-6);
    CHECK(j.d_v == 0.0);
}

TEST_CASE("every function and operator against closed forms") {
    const double u = 0.4, v = 0.9;
    struct Case {
        const char* text;
        double value;
    };
    for (const Case c : {Case{"sin(u)+cos(v)", std::sin(u) + std::cos(v)}, Case{"tan(u*v)", std::tan(u * v)},
                         Case{"exp(u)-log(v)", std::exp(u) - std::log(v)}, Case{"sqrt(u+v)", std::sqrt(u + v)},
                         Case{"sinh(u)/cosh(v)", std::sinh(u) / std::cosh(v)}, Case{"v^0.5", std::sqrt(v)},
                         Case{"u^v", std::pow(u, v)}, Case{"u^-2", 1.0 / (u * u)}, Case{"2^3^2", 512.0},
                         Case{"pi*u", std::numbers::pi * u}, Case{"-u^2", -u * u}, Case{"--u", u},
                         Case{"1e-1*u", 0.1 * u}, Case{" ( u ) * ( v ) ", u * v}, Case{"u-v-1", u - v - 1},
                         Case{"u/v/2", u / v / 2}}) {
        CAPTURE(c.text);
        CHECK(Expr::parse(c.text).eval(u, v) == doctest::Approx(c.value).epsilon(1e-14));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(Expr::parse("1/u").eval(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("log(u)").eval(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("sqrt(u)").eval(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("u^0.5").eval(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("u^v").eval(0.0, 0.5), DomainError);
    CHECK_NOTHROW(Expr::parse("u^3").eval(-2.0, 0.0));
    try {
        Expr::parse("u + log(v)").eval(1.0, -1.0);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("random expressions match the finite-difference oracle on every channel") {
    std::mt19937_64 rng(42);
    for (int n = 0; n < 500; ++n) {
        const Expr e = random_expression(rng, 3);
        const double u = oracle::uniform(rng, -0.9, 0.9), v = oracle::uniform(rng, -0.9, 0.9);
        const Jet2 j = e.eval_jet(u, v);
        const auto fd = oracle::central_differences([&](double a, double b) { return e.eval(a, b); }, u, v);
        CAPTURE(e.print());
        CHECK(oracle::rel_err(j.val, fd.val) == 0.0);
        CHECK(oracle::rel_err(j.d_u, fd.d_u) < 1e-5);
        CHECK(oracle::rel_err(j.d_v, fd.d_v) < 1e-5);
        CHECK(oracle::rel_err(j.d_uu, fd.d_uu) < 1e-5);
        CHECK(oracle::rel_err(j.d_uv, fd.d_uv) < 1e-5);
        CHECK(oracle::rel_err(j.d_vv, fd.d_vv) < 1e-5);
    }
}

TEST_CASE("print then parse reproduces the tree") {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 200; ++n) {
        const Expr e = random_expression(rng, 4);
        CHECK(Expr::parse(e.print()) == e);
    }
    for (const char* text : {"-u^2", "(-u)^2", "2^3^2", "(2^3)^2", "u-(v-1)", "u/(v/2)", "-(-(u))", "u^-2", "1.5e-7"}) {
        CAPTURE(text);
        const Expr e = Expr::parse(text);
        CHECK(Expr::parse(e.print()) == e);
        CHECK(Expr::parse(e.print()).eval(0.3, 0.8) == e.eval(0.3, 0.8));
    }
}

TEST_CASE("mixed partial is symmetric under swapping u and v") {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 100; ++n) {
        const Expr e = random_expression(rng, 3);
        std::string swapped = e.print();
        for (char& c : swapped) c = c == 'u' ? 'v' : c == 'v' ? 'u' : c;  // no function name contains u or v
        const Expr f = Expr::parse(swapped);
        const double u = oracle::uniform(rng, -0.9, 0.9), v = oracle::uniform(rng, -0.9, 0.9);
        const Jet2 a = e.eval_jet(u, v), b = f.eval_jet(v, u);
        CHECK(std::fabs(a.d_uv - b.d_uv) <= 1e-12 * std::max(1.0, std::fabs(a.d_uv)));
        CHECK(std::fabs(a.d_uu - b.d_vv) <= 1e-12 * std::max(1.0, std::fabs(a.d_uu)));
    }
}

TEST_CASE("evaluation is deterministic") {
    const Expr e = Expr::parse("exp(sin(u*v))/(2+cos(u))");
    const Jet2 a = e.eval_jet(0.3, -0.2), b = e.eval_jet(0.3, -0.2);
    CHECK(a == b);
}

}
