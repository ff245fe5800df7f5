// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Composable block IR for quantum operations.
 *
 * A Block is either a primitive gate, a Hamiltonian evolution, or a
 * composite: chain (sequential), kron (parallel on disjoint supports), add
 * (operator sum) or scale (real scalar times operator). Blocks are immutable
 * and cheap to copy; composition functions infer the qubit support.
 *
 * Conventions (fixed across the library):
 *   - chain(A, B) means "A applied first"; as matrices, mat(chain(A,B)) =
 *     mat(B) * mat(A).
 *   - RX(t) = exp(-i t X/2), RY(t) = exp(-i t Y/2), RZ(t) = exp(-i t Z/2),
 *     CPHASE(c, t, p) = diag(1, 1, 1, e^{ip}), N = (I - Z)/2.
 *   - Qubit 0 is the leftmost character of a bitstring and the most
 *     significant bit of a state index.
 */
#pragma once

#include "daqsim/expr.hpp"
#include "daqsim/register.hpp"

#include <optional>
#include <string>
#include <vector>

namespace daqsim {

enum class GateKind { X, Y, Z, H, N, I, RX, RY, RZ, CPHASE, CNOT, CZ };

const char *gate_name(GateKind g);
bool gate_is_parametric(GateKind g);

class Block {
  public:
    enum class Kind { Primitive, HamEvo, Chain, Kron, Add, Scale };

    Kind kind() const;
    const std::string &tag() const;

    // Primitive accessors.
    GateKind gate() const;
    const std::vector<int> &qubits() const;
    const std::optional<Expr> &angle() const;

    // HamEvo accessors.
    const Block &generator() const;
    const Expr &time() const;

    // Scale accessors.
    const Expr &coeff() const;

    /// Children: composite members, HamEvo generator, or Scale operand.
    const std::vector<Block> &children() const;

    /// Sorted union of all primitive supports.
    std::vector<int> qubit_support() const;
    /// Distinct parameters appearing in angles, evolution times and scale
    /// coefficients.
    std::vector<Parameter> parameters() const;

    /// Indented block-tree rendering (one node per line).
    std::string tree_string() const;

    friend bool same_node(const Block &a, const Block &b) { return a.node_ == b.node_; }
    const void *node_id() const { return node_.get(); }

  private:
    struct Node;
    explicit Block(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend Block make_primitive(GateKind g, std::vector<int> qubits, std::optional<Expr> angle);
    friend Block hamevo(const Block &generator, const Expr &time);
    friend Block compose(Block::Kind kind, std::vector<Block> blocks);
    friend Block scale(const Expr &coeff, const Block &b);
    friend Block tag(const Block &b, std::string name);
};

/// Low-level primitive constructor; validates support and angle arity.
Block make_primitive(GateKind g, std::vector<int> qubits, std::optional<Expr> angle);

// Primitive gates. Control comes first for two-qubit gates.
Block X(int q);
Block Y(int q);
Block Z(int q);
Block H(int q);
Block N(int q);
Block I(int q);
Block RX(int q, const Expr &angle);
Block RY(int q, const Expr &angle);
Block RZ(int q, const Expr &angle);
Block CPHASE(int control, int target, const Expr &angle);
Block CNOT(int control, int target);
Block CZ(int control, int target);

Block compose(Block::Kind kind, std::vector<Block> blocks);
Block chain(std::vector<Block> blocks);
Block kron(std::vector<Block> blocks);
Block add(std::vector<Block> blocks);

template <typename... Bs> Block chain(const Block &b0, const Bs &...bs) {
    return chain(std::vector<Block>{b0, bs...});
}
template <typename... Bs> Block kron(const Block &b0, const Bs &...bs) {
    return kron(std::vector<Block>{b0, bs...});
}
template <typename... Bs> Block add(const Block &b0, const Bs &...bs) {
    return add(std::vector<Block>{b0, bs...});
}

Block scale(const Expr &coeff, const Block &b);
inline Block operator*(const Expr &coeff, const Block &b) { return scale(coeff, b); }
inline Block operator+(const Block &a, const Block &b) { return add(a, b); }

/// exp(-i * generator * time); the generator must be an Add/Scale/Kron
/// composition of Hermitian primitives (X, Y, Z, N, I).
Block hamevo(const Block &generator, const Expr &time);

/// Conjugate transpose, realised structurally: chains reverse, rotation
/// angles negate, evolution times negate.
Block dagger(const Block &b);

Block tag(const Block &b, std::string name);

/// Digital QFT on the given (distinct) qubits: per qubit a Hadamard followed
/// by the CPHASE ladder with angles pi/2^(j-l). No terminal SWAP network;
/// the unitary equals the DFT matrix up to a bit-reversal permutation of the
/// output index.
Block qft(const std::vector<int> &support);

/// Hardware-efficient ansatz: per layer, per-qubit RX,RY,RX rotations with
/// fresh variational parameters named theta_{layer}_{qubit}_{rot}, then a
/// CNOT ladder. 3 * n_qubits * depth parameters.
Block hea(int n_qubits, int depth = 1);

enum class FeatureMapType { Fourier, Chebyshev };

/// Kron over the support of RX(q, f(param)) with f = identity (Fourier) or
/// acos (Chebyshev). `param` becomes a feature parameter.
Block feature_map(int n_qubits, const std::string &param,
                  FeatureMapType fm_type = FeatureMapType::Fourier,
                  std::optional<std::vector<int>> support = std::nullopt);

class QuantumCircuit {
  public:
    QuantumCircuit(Register reg, Block block);
    QuantumCircuit(int n_qubits, Block block);

    const Register &reg() const { return reg_; }
    const Block &block() const { return block_; }
    int n_qubits() const { return reg_.n_qubits(); }

  private:
    Register reg_;
    Block block_;
};

} // namespace daqsim
