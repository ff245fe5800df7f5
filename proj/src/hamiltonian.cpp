// SPDX-License-Identifier: Apache-2.0
#include "daqsim/hamiltonian.hpp"

#include <cmath>

namespace daqsim {

namespace {

bool is_one(const Expr &e) { return e.op() == Expr::Op::Const && e.constant() == 1.0; }

Block scaled(const Expr &strength, const Block &term) {
    return is_one(strength) ? term : scale(strength, term);
}

Block interaction_term(Interaction kind, int i, int j) {
    switch (kind) {
    case Interaction::NN:
        return kron(N(i), N(j));
    case Interaction::ZZ:
        return kron(Z(i), Z(j));
    case Interaction::XY:
        return add(kron(X(i), X(j)), kron(Y(i), Y(j)));
    case Interaction::XYZ:
        return add(kron(X(i), X(j)), kron(Y(i), Y(j)), kron(Z(i), Z(j)));
    }
    throw Error("unreachable interaction kind");
}

Block detuning_term(GateKind op, int q) {
    switch (op) {
    case GateKind::X:
        return X(q);
    case GateKind::Y:
        return Y(q);
    case GateKind::Z:
        return Z(q);
    case GateKind::N:
        return N(q);
    default:
        throw NonHermitianCoefficient("detuning operator must be X, Y, Z or N");
    }
}

} // namespace

Block hamiltonian_factory(const HamiltonianSpec &spec) {
    const auto pairs = spec.use_all_node_pairs ? spec.reg.all_node_pairs() : spec.reg.edges();
    const int n = spec.reg.n_qubits();

    if (!spec.interaction_strength_list.empty() &&
        spec.interaction_strength_list.size() != pairs.size())
        throw StrengthLengthMismatch("interaction strength list must match the pair count");
    if (!spec.detuning_strength_list.empty() &&
        spec.detuning_strength_list.size() != static_cast<size_t>(n))
        throw StrengthLengthMismatch("detuning strength list must match the qubit count");

    std::vector<Block> terms;
    if (spec.detuning) {
        for (int q = 0; q < n; ++q) {
            const Expr &alpha = spec.detuning_strength_list.empty()
                                    ? spec.detuning_strength
                                    : spec.detuning_strength_list[q];
            terms.push_back(scaled(alpha, detuning_term(*spec.detuning, q)));
        }
    }
    for (size_t k = 0; k < pairs.size(); ++k) {
        const auto &[i, j] = pairs[k];
        const Expr &beta = spec.interaction_strength_list.empty()
                               ? spec.interaction_strength
                               : spec.interaction_strength_list[k];
        Block term = std::holds_alternative<Interaction>(spec.interaction)
                         ? interaction_term(std::get<Interaction>(spec.interaction), i, j)
                         : std::get<InteractionFn>(spec.interaction)(i, j);
        terms.push_back(scaled(beta, term));
    }
    if (terms.empty())
        throw EmptyComposition("hamiltonian_factory produced no terms");
    return add(std::move(terms));
}

Block rydberg_hamiltonian(const Register &reg, const RydbergParams &p) {
    if (!(p.c6 > 0.0))
        throw NonHermitianCoefficient("c6 must be positive");
    const int n = reg.n_qubits();
    std::vector<Block> terms;
    const Expr half_omega = Expr(0.5) * p.omega;
    for (int i = 0; i < n; ++i) {
        terms.push_back(scale(half_omega * cos(p.phi), X(i)));
        terms.push_back(scale(-(half_omega * sin(p.phi)), Y(i)));
        terms.push_back(scale(-p.delta, N(i)));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            double r = reg.distance(i, j);
            if (r <= 0.0)
                throw CoincidentAtoms("two atoms share the same coordinates");
            terms.push_back(scale(Expr(p.c6 / std::pow(r, 6)), kron(N(i), N(j))));
        }
    return tag(add(std::move(terms)), "Rydberg");
}

Block total_magnetization(int n_qubits) {
    std::vector<Block> terms;
    terms.reserve(n_qubits);
    for (int q = 0; q < n_qubits; ++q)
        terms.push_back(Z(q));
    return add(std::move(terms));
}

Block ising_hamiltonian(int n_qubits, double x_coeff, double zz_coeff) {
    std::vector<Block> terms;
    for (int q = 0; q < n_qubits; ++q)
        terms.push_back(scaled(Expr(x_coeff), X(q)));
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j)
            terms.push_back(scaled(Expr(zz_coeff), kron(Z(i), Z(j))));
    return add(std::move(terms));
}

} // namespace daqsim
