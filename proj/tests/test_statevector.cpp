// SPDX-License-Identifier: Apache-2.0
#include "daqsim/statevector.hpp"

#include "daqsim/hamiltonian.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace daqsim;

namespace {

Block random_three_qubit_block(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::uniform_int_distribution<int> pick(0, 5);
    std::vector<Block> ops;
    for (int k = 0; k < 6; ++k) {
        switch (pick(rng)) {
        case 0:
            ops.push_back(RX(pick(rng) % 3, Expr(unif(rng))));
            break;
        case 1:
            ops.push_back(RY(pick(rng) % 3, Expr(unif(rng))));
            break;
        case 2:
            ops.push_back(RZ(pick(rng) % 3, Expr(unif(rng))));
            break;
        case 3:
            ops.push_back(H(pick(rng) % 3));
            break;
        case 4: {
            int c = pick(rng) % 3;
            ops.push_back(CNOT(c, (c + 1) % 3));
            break;
        }
        default: {
            int c = pick(rng) % 3;
            ops.push_back(CPHASE(c, (c + 1) % 3, Expr(unif(rng))));
            break;
        }
        }
    }
    return chain(std::move(ops));
}

} // namespace

TEST_CASE("state preparation") {
    StateVector psi = product_state("1000");
    CHECK(psi.n_qubits() == 4);
    CHECK(psi[8] == cd(1.0, 0.0)); // qubit 0 is the most significant bit
    CHECK(psi.norm() == doctest::Approx(1.0));

    StateVector zero = zero_state(3);
    CHECK(zero[0] == cd(1.0, 0.0));

    CHECK(product_state("11")[3] == cd(1.0, 0.0));
    CHECK_THROWS_AS(product_state("10a"), BadBitstring);
    CHECK_THROWS_AS(product_state(""), BadBitstring);
}

TEST_CASE("basic gates through run") {
    StateVector one = run(QuantumCircuit(1, X(0)));
    CHECK(std::abs(one[1] - cd(1, 0)) <= 1e-14);

    StateVector plus = run(QuantumCircuit(1, chain(H(0))));
    CHECK(std::abs(plus[0] - cd(std::numbers::sqrt2 / 2, 0)) <= 1e-14);
    CHECK(std::abs(plus[1] - cd(std::numbers::sqrt2 / 2, 0)) <= 1e-14);
}

TEST_CASE("hamiltonian evolution of X for pi/2 maps |0> to -i|1>") {
    StateVector psi = run(QuantumCircuit(1, hamevo(X(0), Expr(std::numbers::pi / 2))));
    CHECK(std::norm(psi[1]) == doctest::Approx(1.0));
    CHECK(std::abs(psi[1] - cd(0, -1)) <= 1e-12);
}

TEST_CASE("sampling") {
    SampleCounts c = sample(QuantumCircuit(1, X(0)), {}, 100, 7);
    REQUIRE(c.size() == 1);
    CHECK(c.at("1") == 100);

    SampleCounts h1 = sample(QuantumCircuit(1, H(0)), {}, 1000, 21);
    long long total = 0;
    for (const auto &[bits, n] : h1)
        total += n;
    CHECK(total == 1000);
    // each outcome within 5 sigma of 500 (sigma = sqrt(1000*0.25) ~ 15.8)
    for (const auto &[bits, n] : h1)
        CHECK(std::abs(double(n) - 500.0) <= 5.0 * 15.9);

    CHECK(sample(QuantumCircuit(1, H(0)), {}, 1000, 21) == h1); // determinism
}

TEST_CASE("expectation values") {
    CHECK(expectation(QuantumCircuit(1, RX(0, Expr(0.7))), Z(0)) ==
          doctest::Approx(std::cos(0.7)).epsilon(1e-12));

    QuantumCircuit idle(4, kron(I(0), I(1), I(2), I(3)));
    CHECK(expectation(idle, total_magnetization(4)) == doctest::Approx(4.0));
    CHECK(expectation(idle, total_magnetization(4), {}, product_state("1000")) ==
          doctest::Approx(2.0));

    // batched shape contract
    std::vector<ParamMap> batch(10, ParamMap{{"t", 0.3}});
    auto out = expectation_batch(QuantumCircuit(1, RX(0, Expr("t"))), {Z(0)}, batch);
    REQUIRE(out.size() == 10);
    for (const auto &row : out)
        CHECK(row.size() == 1);

    std::vector<ParamMap> batch5(5, ParamMap{{"t", 0.1}});
    auto out2 =
        expectation_batch(QuantumCircuit(2, RX(0, Expr("t"))), {Z(0), total_magnetization(2)},
                          batch5);
    REQUIRE(out2.size() == 5);
    for (const auto &row : out2)
        CHECK(row.size() == 2);
}

TEST_CASE("expectation linearity") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    QuantumCircuit c(2, chain(RX(0, Expr(0.4)), CNOT(0, 1), RY(1, Expr(1.1))));
    for (int trial = 0; trial < 20; ++trial) {
        const double a = unif(rng), b = unif(rng);
        Block o1 = kron(Z(0), Z(1));
        Block o2 = X(1);
        const double combined =
            expectation(c, add(scale(Expr(a), o1), scale(Expr(b), o2)));
        const double split = a * expectation(c, o1) + b * expectation(c, o2);
        CHECK(std::abs(combined - split) <= 1e-10);
    }
}

TEST_CASE("to_matrix on reference gates") {
    Eigen::MatrixXcd x = to_matrix(X(0), 1);
    CHECK(x(0, 1) == cd(1, 0));
    CHECK(x(1, 0) == cd(1, 0));
    CHECK(x(0, 0) == cd(0, 0));

    Eigen::MatrixXcd cp = to_matrix(CPHASE(0, 1, Expr(std::numbers::pi)), 2);
    Eigen::MatrixXcd expect = Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
    CHECK(testutil::max_abs_diff(cp, expect) <= 1e-12);

    CHECK_THROWS_AS(to_matrix(X(0), 13), TooManyQubitsForDense);
}

TEST_CASE("norm preservation across random circuits") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        StateVector psi = run(QuantumCircuit(3, random_three_qubit_block(rng)));
        CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
    }
}

TEST_CASE("chain composition equals sequential application") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        Block a = random_three_qubit_block(rng);
        Block b = random_three_qubit_block(rng);
        StateVector joint = run(QuantumCircuit(3, chain(a, b)));
        StateVector stepped = run(QuantumCircuit(3, b), {}, run(QuantumCircuit(3, a)));
        double diff = 0.0;
        for (std::size_t i = 0; i < joint.size(); ++i)
            diff = std::max(diff, std::abs(joint[i] - stepped[i]));
        CHECK(diff <= 1e-12);
    }
}

TEST_CASE("hamevo half-step composition") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Block gen = add(scale(Expr(unif(rng)), kron(Z(0), Z(1))), scale(Expr(unif(rng)), X(1)),
                        scale(Expr(unif(rng)), kron(Y(0), X(2))), scale(Expr(unif(rng)), N(2)));
        const double t = unif(rng) * 2.0;
        StateVector full = run(QuantumCircuit(3, hamevo(gen, Expr(t))));
        StateVector halves =
            run(QuantumCircuit(3, chain(hamevo(gen, Expr(t / 2)), hamevo(gen, Expr(t / 2)))));
        double diff = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i)
            diff = std::max(diff, std::abs(full[i] - halves[i]));
        CHECK(diff <= 1e-10);
    }
}

TEST_CASE("sampling distribution converges in total variation") {
    std::mt19937_64 rng(105);
    for (int trial = 0; trial < 5; ++trial) {
        QuantumCircuit c(3, random_three_qubit_block(rng));
        StateVector psi = run(c);
        SampleCounts counts = sample(c, {}, 10000, 1234 + trial);
        double tv = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            std::string bits(3, '0');
            for (int q = 0; q < 3; ++q)
                if (i & (std::size_t(1) << (2 - q)))
                    bits[q] = '1';
            const double emp = counts.count(bits) ? counts.at(bits) / 10000.0 : 0.0;
            tv += 0.5 * std::abs(emp - std::norm(psi[i]));
        }
        CHECK(tv <= 0.05);
    }
}

TEST_CASE("illegal circuit blocks are rejected") {
    CHECK_THROWS_AS(run(QuantumCircuit(1, N(0))), NonUnitaryBlockInCircuit);
    CHECK_THROWS_AS(run(QuantumCircuit(2, add(X(0), X(1)))), NonUnitaryBlockInCircuit);
    CHECK_THROWS_AS(run(QuantumCircuit(1, scale(Expr(2.0), X(0)))), NonUnitaryBlockInCircuit);
    CHECK_THROWS_AS(run(QuantumCircuit(1, RX(0, Expr("t")))), MissingParameter);
}

TEST_CASE("observable flattening rejects non-Hermitian structures") {
    // chain(X,Y) on one qubit is iZ after multiplication: complex coefficient
    CHECK_THROWS_AS(expectation(QuantumCircuit(1, H(0)), chain(X(0), Y(0))),
                    NonHermitianObservable);
    // but products over disjoint qubits are fine
    CHECK(expectation(QuantumCircuit(2, kron(I(0), I(1))), chain(Z(0), Z(1))) ==
          doctest::Approx(1.0));
}

TEST_CASE("state csv and counts json formats") {
    StateVector psi = product_state("01");
    std::string csv = state_to_csv(psi);
    CHECK(csv.find("index,re,im\n") == 0);
    CHECK(csv.find("1,1,0") != std::string::npos);

    SampleCounts counts{{"01", 7}, {"11", 3}};
    CHECK(counts_to_json(counts) == "{\"01\":7,\"11\":3}");
}
