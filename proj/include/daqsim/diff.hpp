// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Circuit differentiation: generalized parameter-shift rule (spectral gaps +
 * shift linear system), adjoint differentiation for digital circuits, and a
 * central finite-difference oracle. User-level parameters compose with the
 * gate-level derivatives through the chain rule of their embedding
 * expressions.
 *
 * The engine operates on a flattened circuit: a program-order list of ops,
 * each carrying its angle/time expression. Shifting a single occurrence
 * means adding an offset to that op's evaluated parameter, which makes
 * nested (higher-order) feature derivatives representable as weighted sums
 * of expectation values at shifted configurations (ShiftedSum).
 */
#pragma once

#include "daqsim/block.hpp"
#include "daqsim/statevector.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace daqsim {

enum class DiffMode { GPSR, Adjoint, FD };

struct FlatOp {
    bool is_evo = false;
    GateKind gate = GateKind::I;
    std::vector<int> qubits;
    std::optional<Expr> param;      // rotation angle or evolution time
    std::optional<Block> generator; // evolutions only
};

class FlatCircuit {
  public:
    static FlatCircuit compile(const QuantumCircuit &circuit);

    int n_qubits() const { return n_; }
    const std::vector<FlatOp> &ops() const { return ops_; }
    bool digital_only() const;

    /// Evaluated angle/time per op (0 for non-parametric ops).
    std::vector<double> base_params(const ParamMap &values) const;
    void apply(StateVector &psi, const std::vector<double> &params, const ParamMap &values) const;

  private:
    int n_ = 0;
    std::vector<FlatOp> ops_;
};

/// Unique positive eigenvalue differences of a Hermitian generator,
/// deduplicated within 1e-8.
std::vector<double> spectral_gaps(const Block &generator, int n_qubits);

/// Coefficients of the GPSR estimate d f/da = sum_k w_k f(a + s_k) given the
/// gaps of the op generator and a choice of positive shifts (one per gap):
/// solves the 4 sin(gap*shift/2) system. Returns (w_k, s_k) pairs.
std::vector<std::pair<double, double>> gpsr_weights(const std::vector<double> &gaps,
                                                    const std::vector<double> &shifts);

/// Expectation of one observable after a fixed circuit, as a function of the
/// per-op parameter vector. Memoizes evaluations and per-op shift rules.
class CircuitFunction {
  public:
    CircuitFunction(const QuantumCircuit &circuit, const Block &observable, ParamMap values,
                    std::optional<StateVector> state = std::nullopt);

    const FlatCircuit &flat() const { return flat_; }
    const ParamMap &values() const { return values_; }
    const std::vector<double> &base() const { return base_; }

    double eval(const std::vector<double> &params) const;
    double eval_base() const { return eval(base_); }
    /// Recompute base parameters (plus optional per-op shifts) under a
    /// different value map; used by the finite-difference paths.
    double eval_values(const ParamMap &values, const std::map<int, double> &shifts = {}) const;

    /// Ops whose parameter expression depends on `name`. Throws if the name
    /// only appears inside an evolution generator (not differentiable here).
    /// Memoized per name, as is the evaluated chain factor d(expr_k)/d(name).
    const std::vector<int> &occurrences(const std::string &name) const;
    double chain_factor(int op_index, const std::string &name) const;

    /// GPSR rule of op k: d f/d a_k = sum w_i f(a_k + s_i).
    const std::vector<std::pair<double, double>> &rule_for(int op_index) const;

    /// d f / d a_k for every parametric op, at the given configuration.
    /// mode GPSR evaluates shifted expectations; mode Adjoint runs one
    /// reverse sweep (digital circuits only).
    const std::vector<double> &gate_gradients(const std::vector<double> &params,
                                              DiffMode mode) const;

  private:
    FlatCircuit flat_;
    std::vector<PauliTerm> obs_terms_;
    Block observable_;
    ParamMap values_;
    std::optional<StateVector> init_;
    std::vector<double> base_;
    mutable std::map<std::vector<double>, double> eval_memo_;
    mutable std::map<int, std::vector<std::pair<double, double>>> rule_memo_;
    mutable std::map<std::pair<int, std::vector<double>>, std::vector<double>> grad_memo_;
    mutable std::map<std::string, std::vector<int>> occ_memo_;
    mutable std::map<std::pair<int, std::string>, double> chain_memo_;
};

struct GradientRequest {
    QuantumCircuit circuit;
    Block observable;
    std::vector<ParamMap> values; // batch
    std::vector<std::string> wrt;
    DiffMode mode = DiffMode::GPSR;
    std::optional<StateVector> state = std::nullopt;
    double fd_step = 1e-4;
};

struct GradientResult {
    /// One name->derivative map per batch entry.
    std::vector<std::map<std::string, double>> rows;
};

GradientResult gradient(const GradientRequest &req);
GradientResult gpsr_gradient(GradientRequest req);
GradientResult adjoint_gradient(GradientRequest req);
GradientResult finite_diff_gradient(GradientRequest req, double h = 1e-4);

/// A weighted sum of expectations at occurrence-shifted configurations:
/// sum_k w_k(values) * f(base + shift_k). Differentiating with respect to a
/// feature produces another ShiftedSum (weights pick up chain-rule factors,
/// shifts pick up GPSR offsets), enabling first and second derivatives of a
/// model output with respect to its inputs.
class ShiftedSum {
  public:
    struct Term {
        Expr weight;
        std::map<int, double> shifts; // op index -> accumulated shift
    };

    /// The plain expectation f itself.
    explicit ShiftedSum(std::shared_ptr<CircuitFunction> fn);

    ShiftedSum derivative(const std::string &wrt) const;
    double value() const;
    /// Value under a modified parameter map (weights and base re-evaluated).
    double value_at(const ParamMap &values) const;

    /// d(value)/d(name) for each requested parameter, computed with the
    /// given engine at every shifted configuration.
    std::map<std::string, double> gradient(const std::vector<std::string> &wrt, DiffMode mode,
                                           double fd_step = 1e-4) const;

    const std::vector<Term> &terms() const { return terms_; }
    const std::shared_ptr<CircuitFunction> &fn() const { return fn_; }

  private:
    ShiftedSum(std::shared_ptr<CircuitFunction> fn, std::vector<Term> terms)
        : fn_(std::move(fn)), terms_(std::move(terms)) {}
    std::shared_ptr<CircuitFunction> fn_;
    std::vector<Term> terms_;
};

} // namespace daqsim
