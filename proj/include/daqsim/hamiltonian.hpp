// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Hamiltonian construction: the generic detuning+interaction factory, custom
 * pair interactions, standard observables and the Rydberg effective
 * Hamiltonian.
 */
#pragma once

#include "daqsim/block.hpp"
#include "daqsim/register.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace daqsim {

enum class Interaction { NN, ZZ, XY, XYZ };

/// Custom two-qubit interaction term builder, signed with the pair indices.
using InteractionFn = std::function<Block(int, int)>;

/// Interaction coefficient for Rydberg level 70 (rad um^6 / us).
inline constexpr double kC6Level70 = 865723.02;

struct HamiltonianSpec {
    Register reg = Register::line(1);
    std::variant<Interaction, InteractionFn> interaction = Interaction::NN;
    /// Uniform strength broadcast to every pair, or a per-pair list ordered
    /// like edges()/all_node_pairs() (lexicographic i<j).
    Expr interaction_strength{1.0};
    std::vector<Expr> interaction_strength_list;
    /// Detuning operator; no detuning terms when absent.
    std::optional<GateKind> detuning;
    Expr detuning_strength{1.0};
    std::vector<Expr> detuning_strength_list;
    bool use_all_node_pairs = false;
};

/// Sum of per-qubit detuning terms and pairwise interaction terms over the
/// register's edges (or all node pairs).
Block hamiltonian_factory(const HamiltonianSpec &spec);

struct RydbergParams {
    Expr omega{0.0}; // rad/us
    Expr delta{0.0}; // rad/us
    Expr phi{0.0};   // rad
    double c6 = kC6Level70;
    Expr duration{1.0}; // us, consumed by the analog lowering
};

/// sum_i [ (omega/2)(cos(phi) X_i - sin(phi) Y_i) - delta N_i ]
///   + sum_{j<i} c6/|r_ij|^6 N_i N_j  over all register pairs.
Block rydberg_hamiltonian(const Register &reg, const RydbergParams &p);

/// sum_i Z_i
Block total_magnetization(int n_qubits);
/// sum_i x_coeff X_i + sum_{i<j} zz_coeff Z_i Z_j over the complete graph.
Block ising_hamiltonian(int n_qubits, double x_coeff = 1.0, double zz_coeff = 1.0);

} // namespace daqsim
