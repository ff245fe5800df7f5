// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Dense statevector backend: state preparation, block application, sampling,
 * expectation values and dense-matrix extraction.
 *
 * Hamiltonian evolutions are applied through a Hermitian eigendecomposition
 * of the generator on its qubit support (with a direct phase path for
 * diagonal generators). Primitive gates go through the runtime-dispatched
 * kernels. Dense matrices are capped at 12 qubits.
 */
#pragma once

#include "daqsim/block.hpp"
#include "daqsim/kernels.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace daqsim {

using cd = std::complex<double>;

class StateVector {
  public:
    explicit StateVector(int n_qubits); // |0...0>
    StateVector(const StateVector &other);
    StateVector(StateVector &&other) noexcept = default;
    StateVector &operator=(const StateVector &other);
    StateVector &operator=(StateVector &&other) noexcept = default;

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }
    cd *data() { return amps_.data(); }
    const cd *data() const { return amps_.data(); }
    cd &operator[](std::size_t i) { return amps_[i]; }
    const cd &operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;
    void set_zero();

    /// Number of amplitude-buffer allocations since process start (copies
    /// included, moves excluded). Used to pin the adjoint memory contract.
    static long long allocations();

  private:
    int n_qubits_;
    std::vector<cd> amps_;
};

/// |0...0> on n qubits.
StateVector zero_state(int n_qubits);
/// Computational basis state; qubit 0 is the leftmost character.
StateVector product_state(const std::string &bitstring);

using SampleCounts = std::map<std::string, long long>;

/// Weighted Pauli product over state-index bit masks; `g` already carries
/// the i^(#Y) factor.
struct PauliTerm {
    cd g;
    std::uint64_t x_mask = 0, y_mask = 0, z_mask = 0;
    bool diagonal() const { return x_mask == 0 && y_mask == 0; }
};

/// Decompose an observable/generator block into a sum of Pauli products
/// (X/Y/Z/N/I/H primitives under Add/Scale/Kron/Chain). Coefficients of the
/// merged sum must be real (Hermiticity), else NonHermitianObservable.
std::vector<PauliTerm> flatten_pauli_sum(const Block &b, int n_qubits, const ParamMap &values);

/// <bra|term|ket> for a single Pauli product; no allocations.
cd cross_pauli(const StateVector &bra, const StateVector &ket, const PauliTerm &term);
/// <psi|term|psi> for a single Pauli product.
cd expect_pauli(const StateVector &psi, const PauliTerm &term);
/// dst += term applied to src.
void accumulate_pauli(StateVector &dst, const StateVector &src, const PauliTerm &term);

/// Cached eigendecomposition of a HamEvo generator on its support.
class EvoCache {
  public:
    struct Entry {
        std::optional<Block> generator; // keep-alive for the pointer key
        std::vector<int> support;       // sorted original qubit indices
        bool diagonal = false;
        std::vector<double> diag;  // 2^k local diagonal (diagonal case)
        Eigen::MatrixXcd vecs;     // eigenvectors (dense case)
        Eigen::VectorXd vals;      // eigenvalues
    };
    std::shared_ptr<const Entry> get(const Block &generator, const ParamMap &values);

  private:
    std::mutex mu_;
    std::map<std::pair<const void *, std::vector<double>>, std::shared_ptr<const Entry>> map_;
};

EvoCache &evo_cache();

/// Apply a dense 2^k x 2^k operator to the given qubits of an n-qubit state.
void apply_dense_on_support(StateVector &psi, const Eigen::MatrixXcd &u,
                            const std::vector<int> &qubits);

/// Apply one primitive gate (unitary path).
void apply_gate(StateVector &psi, GateKind gate, const std::vector<int> &qubits, double angle);
/// Apply exp(-i * generator * t).
void apply_hamevo(StateVector &psi, const Block &generator, double t, const ParamMap &values);

/// Apply a block as a circuit unitary. Add/Scale and non-unitary primitives
/// are rejected with NonUnitaryBlockInCircuit.
void apply_unitary(StateVector &psi, const Block &b, const ParamMap &values);
/// Apply a block as a general linear operator (oracle path; Add allocates).
void apply_linear(StateVector &psi, const Block &b, const ParamMap &values);

StateVector run(const QuantumCircuit &circuit, const ParamMap &values = {},
                std::optional<StateVector> state = std::nullopt);

/// Multinomial sampling of |amps|^2 with an inverse-CDF draw from a seeded
/// mt19937_64. Deterministic per seed.
SampleCounts sample_state(const StateVector &psi, long long n_shots, std::uint64_t seed);
SampleCounts sample(const QuantumCircuit &circuit, const ParamMap &values, long long n_shots,
                    std::uint64_t seed, std::optional<StateVector> state = std::nullopt);

double expectation(const QuantumCircuit &circuit, const Block &observable,
                   const ParamMap &values = {}, std::optional<StateVector> state = std::nullopt);
/// Batched form; result shape (batch, n_observables).
std::vector<std::vector<double>> expectation_batch(const QuantumCircuit &circuit,
                                                   const std::vector<Block> &observables,
                                                   const std::vector<ParamMap> &batch,
                                                   std::optional<StateVector> state = std::nullopt);

/// Dense matrix of a block by column-wise application to basis states.
/// Capped at 12 qubits (TooManyQubitsForDense).
Eigen::MatrixXcd to_matrix(const Block &b, int n_qubits, const ParamMap &values = {});

/// CSV dump "index,re,im\n..." of the amplitudes.
std::string state_to_csv(const StateVector &psi);
std::string counts_to_json(const SampleCounts &counts);

} // namespace daqsim
