// SPDX-License-Identifier: Apache-2.0
#include "daqsim/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace daqsim;

namespace {

double central_fd(const Expr &e, const std::string &p, ParamMap values, double h = 1e-5) {
    values[p] += h;
    const double plus = e.evaluate(values);
    values[p] -= 2 * h;
    const double minus = e.evaluate(values);
    return (plus - minus) / (2 * h);
}

} // namespace

TEST_CASE("evaluate basic arithmetic") {
    Expr theta{Parameter::variational("theta")};
    Expr phi{Parameter::feature("phi")};
    CHECK((theta + phi).evaluate({{"theta", 0.3}, {"phi", 0.2}}) == doctest::Approx(0.5));

    Expr e = acos(theta + phi) * Expr(std::numbers::pi);
    CHECK(e.evaluate({{"theta", 0.5}, {"phi", 0.0}}) ==
          doctest::Approx(std::numbers::pi * std::acos(0.5)).epsilon(1e-12));

    CHECK(Expr(std::numbers::pi / 2).evaluate({}) == doctest::Approx(1.5707963267948966));
}

TEST_CASE("fixed parameters need no values; others do") {
    Expr fixed{Parameter::fixed("half_pi", std::numbers::pi / 2)};
    CHECK(fixed.evaluate({}) == doctest::Approx(std::numbers::pi / 2));

    Expr theta{"theta"}; // strings auto-promote to variational
    CHECK_THROWS_AS(theta.evaluate({}), MissingParameter);
}

TEST_CASE("evaluation domain errors") {
    Expr x{"x"};
    CHECK_THROWS_AS(acos(x).evaluate({{"x", 1.5}}), DomainError);
    CHECK_THROWS_AS(pow(Expr(0.0), Expr(-1.0)).evaluate({}), DomainError);
    CHECK_THROWS_AS(sqrt(Expr(-2.0)).evaluate({}), DomainError);
}

TEST_CASE("evaluate distributes over Add exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    Expr a = sin(Expr("u")) * Expr(1.7);
    Expr b = cos(Expr("v")) + Expr(0.3);
    for (int i = 0; i < 100; ++i) {
        ParamMap v{{"u", unif(rng)}, {"v", unif(rng)}};
        CHECK((a + b).evaluate(v) == a.evaluate(v) + b.evaluate(v));
    }
}

TEST_CASE("differentiate simple rules") {
    Expr theta{"theta"};
    Expr phi{"phi"};
    CHECK((theta * phi).differentiate("theta").evaluate({{"theta", 2.0}, {"phi", 3.0}}) ==
          doctest::Approx(3.0));
    CHECK(acos(theta).differentiate("theta").evaluate({{"theta", 0.5}}) ==
          doctest::Approx(-1.0 / std::sqrt(1.0 - 0.25)).epsilon(1e-12));
    CHECK(Expr(1.0).differentiate("phi").evaluate({}) == 0.0);
}

TEST_CASE("analytic derivative matches central differences") {
    Expr x{Parameter::feature("x")};
    Expr y{Parameter::variational("y")};
    const std::vector<Expr> exprs = {
        sin(x) * cos(y),
        acos(x * Expr(0.5)) * Expr(std::numbers::pi),
        exp(x * Expr(0.3)) + sqrt(y * y + Expr(1.0)),
        pow(x + Expr(2.0), Expr(3.0)) - y,
        -(x * y) + sin(cos(x)),
        pow(sqrt(x + Expr(2.0)), Expr(-1.0)),
    };
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    for (const auto &e : exprs) {
        for (int trial = 0; trial < 20; ++trial) {
            ParamMap v{{"x", unif(rng)}, {"y", unif(rng)}};
            for (const char *p : {"x", "y"}) {
                const double analytic = e.differentiate(p).evaluate(v);
                const double fd = central_fd(e, p, v);
                CHECK(std::abs(analytic - fd) <= 1e-6 * (1.0 + std::abs(analytic)));
            }
        }
    }
}

TEST_CASE("collect_parameters classifies and deduplicates") {
    Expr theta{Parameter::variational("theta")};
    Expr phi{Parameter::feature("phi")};
    auto params = (acos(theta + phi) * Expr(std::numbers::pi)).parameters();
    REQUIRE(params.size() == 2);
    CHECK(params[0].name == "phi");
    CHECK(params[0].kind == ParamKind::Feature);
    CHECK(params[1].name == "theta");
    CHECK(params[1].kind == ParamKind::Variational);

    CHECK(Expr(3.0).parameters().empty());
    CHECK((theta + theta).parameters().size() == 1);
}

TEST_CASE("derivative parameters are a subset of the original") {
    Expr x{Parameter::feature("x")};
    Expr y{Parameter::variational("y")};
    Expr e = acos(x) * y + sin(y);
    auto before = e.parameters();
    auto after = e.differentiate("x").parameters();
    for (const auto &p : after) {
        bool found = false;
        for (const auto &q : before)
            found = found || q.name == p.name;
        CHECK(found);
    }
}

TEST_CASE("mixed kinds under one name are rejected") {
    Expr a{Parameter::variational("p")};
    Expr b{Parameter::feature("p")};
    CHECK_THROWS_AS((a + b).parameters(), Error);
}

TEST_CASE("sexpr serialization") {
    Expr theta{Parameter::variational("theta")};
    Expr phi{Parameter::feature("phi")};
    Expr e = acos(theta + phi) * Expr(3.5);
    CHECK(e.sexpr() == "(mul (acos (add (var theta) (feat phi))) (const 3.5))");
    CHECK(Expr(Parameter::fixed("c", 2.0)).sexpr() == "(fixed c 2)");
}

TEST_CASE("derivative folds trivial factors") {
    // d/dx (x * 3) should not leave 1*3 + x*0 shaped trees behind.
    Expr x{"x"};
    Expr d = (x * Expr(3.0)).differentiate("x");
    CHECK(d.op() == Expr::Op::Const);
    CHECK(d.constant() == 3.0);
}
