// SPDX-License-Identifier: Apache-2.0
#include "daqsim/register.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace daqsim;

TEST_CASE("line register geometry") {
    auto reg = Register::line(3);
    REQUIRE(reg.n_qubits() == 3);
    CHECK(reg.coords()[0] == Register::Coord{0.0, 0.0});
    CHECK(reg.coords()[1] == Register::Coord{1.0, 0.0});
    CHECK(reg.coords()[2] == Register::Coord{2.0, 0.0});
    CHECK(reg.edges() == std::vector<Register::Pair>{{0, 1}, {1, 2}});
    CHECK(reg.distance(0, 2) == doctest::Approx(2.0));
    CHECK(reg.all_node_pairs().size() == 3);
    CHECK(reg.edges().size() == 2);
}

TEST_CASE("from_coordinates edges at minimal distance") {
    auto reg = Register::from_coordinates({{0.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}});
    REQUIRE(reg.n_qubits() == 3);
    CHECK(reg.edges() == std::vector<Register::Pair>{{0, 1}, {1, 2}});
}

TEST_CASE("circle register respects the circumradius oracle") {
    const int n = 4;
    const double spacing = 1.0;
    auto reg = Register::circle(n, spacing);
    // r = spacing / (2 sin(pi/n)); neighbours sit `spacing` apart, the
    // diagonal of the square is the diameter.
    const double r = spacing / (2.0 * std::sin(std::numbers::pi / n));
    for (int i = 0; i < n; ++i)
        CHECK(std::hypot(reg.coords()[i][0], reg.coords()[i][1]) == doctest::Approx(r));
    std::set<Register::Pair> edges(reg.edges().begin(), reg.edges().end());
    CHECK(edges == std::set<Register::Pair>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    for (const auto &[i, j] : reg.edges())
        CHECK(reg.distance(i, j) == doctest::Approx(spacing));
    CHECK(reg.distance(0, 2) == doctest::Approx(std::numbers::sqrt2));
}

TEST_CASE("triangular lattice edges all have length spacing") {
    auto reg = Register::triangular_lattice(2, 2, 1.0);
    CHECK(reg.n_qubits() == 9); // (2+1) x (2+1) rhombic patch of sites
    CHECK(!reg.edges().empty());
    for (const auto &[i, j] : reg.edges())
        CHECK(std::abs(reg.distance(i, j) - 1.0) <= 1e-9);
    // Interior sites of a triangular tiling have six unit neighbours; the
    // middle site of the 3x3 patch is one.
    int degree_of_4 = 0;
    for (const auto &[i, j] : reg.edges())
        if (i == 4 || j == 4)
            ++degree_of_4;
    CHECK(degree_of_4 == 6);
}

TEST_CASE("edges are a subset of all node pairs") {
    for (const Register &reg :
         {Register::line(5), Register::circle(6, 2.0), Register::triangular_lattice(2, 3),
          Register::from_coordinates({{0, 0}, {1, 1}, {2, 0}, {5, 5}})}) {
        std::set<Register::Pair> pairs;
        for (const auto &p : reg.all_node_pairs())
            pairs.insert(p);
        for (const auto &e : reg.edges())
            CHECK(pairs.count(e) == 1);
    }
}

TEST_CASE("coordinate scaling scales distances exactly") {
    auto reg = Register::triangular_lattice(2, 2, 1.5);
    auto scaled = reg.scaled(3.7);
    for (const auto &[i, j] : reg.all_node_pairs()) {
        const double expect = 3.7 * reg.distance(i, j);
        CHECK(std::abs(scaled.distance(i, j) - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("json round-trip preserves coordinates bit-exactly") {
    auto reg = Register::from_coordinates({{0.1234567890123456, -7.5}, {2.25, 3.125}, {9.0, 0.0}});
    auto back = Register::from_json(reg.to_json());
    REQUIRE(back.n_qubits() == reg.n_qubits());
    for (int i = 0; i < reg.n_qubits(); ++i) {
        CHECK(back.coords()[i][0] == reg.coords()[i][0]);
        CHECK(back.coords()[i][1] == reg.coords()[i][1]);
    }
    CHECK(back.edges() == reg.edges());
}

TEST_CASE("constructor errors") {
    CHECK_THROWS_AS(Register::line(0), EmptyRegister);
    CHECK_THROWS_AS(Register::line(3, 0.0), InvalidSpacing);
    CHECK_THROWS_AS(Register::line(3, -1.0), InvalidSpacing);
    CHECK_THROWS_AS(Register::from_coordinates({}), EmptyRegister);
}
