// SPDX-License-Identifier: Apache-2.0
#include "daqsim/diff.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace daqsim {

// ---------------------------------------------------------------------------
// FlatCircuit

namespace {

void flatten_ops(const Block &b, std::vector<FlatOp> &out) {
    switch (b.kind()) {
    case Block::Kind::Primitive: {
        FlatOp op;
        op.gate = b.gate();
        op.qubits = b.qubits();
        op.param = b.angle();
        if (b.gate() == GateKind::N)
            throw NonUnitaryBlockInCircuit("N is not unitary; use it inside generators");
        out.push_back(std::move(op));
        return;
    }
    case Block::Kind::HamEvo: {
        FlatOp op;
        op.is_evo = true;
        op.param = b.time();
        op.generator = b.generator();
        out.push_back(std::move(op));
        return;
    }
    case Block::Kind::Chain:
    case Block::Kind::Kron:
        for (const auto &c : b.children())
            flatten_ops(c, out);
        return;
    case Block::Kind::Add:
    case Block::Kind::Scale:
        throw NonUnitaryBlockInCircuit(
            "Add/Scale blocks are only legal inside HamEvo generators and observables");
    }
}

} // namespace

FlatCircuit FlatCircuit::compile(const QuantumCircuit &circuit) {
    FlatCircuit flat;
    flat.n_ = circuit.n_qubits();
    flatten_ops(circuit.block(), flat.ops_);
    return flat;
}

bool FlatCircuit::digital_only() const {
    return std::none_of(ops_.begin(), ops_.end(), [](const FlatOp &op) { return op.is_evo; });
}

std::vector<double> FlatCircuit::base_params(const ParamMap &values) const {
    std::vector<double> out(ops_.size(), 0.0);
    for (size_t k = 0; k < ops_.size(); ++k)
        if (ops_[k].param)
            out[k] = ops_[k].param->evaluate(values);
    return out;
}

void FlatCircuit::apply(StateVector &psi, const std::vector<double> &params,
                        const ParamMap &values) const {
    for (size_t k = 0; k < ops_.size(); ++k) {
        const FlatOp &op = ops_[k];
        if (op.is_evo)
            apply_hamevo(psi, *op.generator, params[k], values);
        else
            apply_gate(psi, op.gate, op.qubits, params[k]);
    }
}

// ---------------------------------------------------------------------------
// Spectral gaps and shift weights

namespace {

std::vector<double> gaps_from_eigenvalues(const std::vector<double> &evals) {
    std::vector<double> gaps;
    for (size_t i = 0; i < evals.size(); ++i)
        for (size_t j = i + 1; j < evals.size(); ++j) {
            double g = std::abs(evals[i] - evals[j]);
            if (g > 1e-8)
                gaps.push_back(g);
        }
    std::sort(gaps.begin(), gaps.end());
    std::vector<double> out;
    for (double g : gaps)
        if (out.empty() || g - out.back() > 1e-8)
            out.push_back(g);
    return out;
}

} // namespace

std::vector<double> spectral_gaps(const Block &generator, int n_qubits) {
    Eigen::MatrixXcd m = to_matrix(generator, n_qubits);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw NonHermitianGenerator("spectral_gaps requires a Hermitian generator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    std::vector<double> evals(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
    return gaps_from_eigenvalues(evals);
}

std::vector<std::pair<double, double>> gpsr_weights(const std::vector<double> &gaps,
                                                    const std::vector<double> &shifts) {
    const int s = static_cast<int>(gaps.size());
    if (s == 0)
        return {};
    if (static_cast<int>(shifts.size()) != s)
        throw IllConditionedShifts("need exactly one shift per spectral gap");
    Eigen::MatrixXd m(s, s);
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c)
            m(r, c) = 4.0 * std::sin(gaps[c] * shifts[r] / 2.0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(s - 1);
    if (!std::isfinite(cond) || cond > 1e10)
        throw IllConditionedShifts("shift matrix condition number exceeds 1e10");
    // d f/dx = gaps . R with M R = F, F_r = f(x+shift_r) - f(x-shift_r):
    // as a linear form in the evaluations, q = M^-T gaps.
    Eigen::VectorXd gap_vec(s);
    for (int i = 0; i < s; ++i)
        gap_vec(i) = gaps[i];
    Eigen::VectorXd q = svd.matrixU() *
                        (svd.matrixV().transpose() * gap_vec).cwiseQuotient(svd.singularValues());
    std::vector<std::pair<double, double>> out;
    out.reserve(2 * s);
    for (int r = 0; r < s; ++r) {
        out.emplace_back(q(r), shifts[r]);
        out.emplace_back(-q(r), -shifts[r]);
    }
    return out;
}

namespace {

std::vector<std::pair<double, double>> default_rule(const std::vector<double> &gaps) {
    if (gaps.empty())
        return {};
    const int s = static_cast<int>(gaps.size());
    const double max_gap = gaps.back();
    std::vector<double> shifts(s);
    for (int m = 1; m <= s; ++m)
        shifts[m - 1] = m * std::numbers::pi / (s * max_gap);
    try {
        return gpsr_weights(gaps, shifts);
    } catch (const IllConditionedShifts &) {
        for (auto &d : shifts)
            d *= 1.0 + 1e-3; // one perturbed retry, then give up
        return gpsr_weights(gaps, shifts);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// CircuitFunction

CircuitFunction::CircuitFunction(const QuantumCircuit &circuit, const Block &observable,
                                 ParamMap values, std::optional<StateVector> state)
    : flat_(FlatCircuit::compile(circuit)), observable_(observable), values_(std::move(values)),
      init_(std::move(state)) {
    obs_terms_ = flatten_pauli_sum(observable_, flat_.n_qubits(), values_);
    base_ = flat_.base_params(values_);
}

double CircuitFunction::eval(const std::vector<double> &params) const {
    auto it = eval_memo_.find(params);
    if (it != eval_memo_.end())
        return it->second;
    StateVector psi = init_ ? *init_ : zero_state(flat_.n_qubits());
    flat_.apply(psi, params, values_);
    cd total = 0.0;
    for (const auto &t : obs_terms_)
        total += expect_pauli(psi, t);
    eval_memo_.emplace(params, total.real());
    return total.real();
}

double CircuitFunction::eval_values(const ParamMap &values,
                                    const std::map<int, double> &shifts) const {
    StateVector psi = init_ ? *init_ : zero_state(flat_.n_qubits());
    auto params = flat_.base_params(values);
    for (const auto &[k, s] : shifts)
        params[k] += s;
    flat_.apply(psi, params, values);
    auto terms = flatten_pauli_sum(observable_, flat_.n_qubits(), values);
    cd total = 0.0;
    for (const auto &t : terms)
        total += expect_pauli(psi, t);
    return total.real();
}

const std::vector<int> &CircuitFunction::occurrences(const std::string &name) const {
    auto it = occ_memo_.find(name);
    if (it != occ_memo_.end())
        return it->second;
    std::vector<int> out;
    for (size_t k = 0; k < flat_.ops().size(); ++k) {
        const FlatOp &op = flat_.ops()[k];
        if (op.param && op.param->depends_on(name)) {
            out.push_back(static_cast<int>(k));
            continue;
        }
        if (op.is_evo) {
            for (const auto &p : op.generator->parameters())
                if (p.name == name && p.kind != ParamKind::Fixed)
                    throw Error("parameter '" + name +
                                "' appears inside an evolution generator; only angle/time "
                                "parameters are differentiable");
        }
    }
    return occ_memo_.emplace(name, std::move(out)).first->second;
}

double CircuitFunction::chain_factor(int op_index, const std::string &name) const {
    auto key = std::make_pair(op_index, name);
    auto it = chain_memo_.find(key);
    if (it != chain_memo_.end())
        return it->second;
    const double value =
        flat_.ops()[op_index].param->differentiate(name).evaluate(values_);
    return chain_memo_.emplace(std::move(key), value).first->second;
}

const std::vector<std::pair<double, double>> &CircuitFunction::rule_for(int op_index) const {
    auto it = rule_memo_.find(op_index);
    if (it != rule_memo_.end())
        return it->second;
    const FlatOp &op = flat_.ops()[op_index];
    std::vector<double> gaps;
    if (!op.is_evo) {
        // exp(-i a P/2) for rotations: Pauli generator, single gap of 2;
        // CPHASE(a) = exp(-i (a/2) (-2 N(x)N)): eigenvalues {0,-2}, gap 2.
        gaps = {2.0};
    } else {
        // exp(-i t M) = exp(-i (t/2) (2M)): gaps are twice the generator's.
        auto entry = evo_cache().get(*op.generator, values_);
        std::vector<double> evals;
        if (entry->diagonal)
            evals = entry->diag;
        else
            evals.assign(entry->vals.data(), entry->vals.data() + entry->vals.size());
        for (auto &v : evals)
            v *= 2.0;
        gaps = gaps_from_eigenvalues(evals);
    }
    auto [it2, inserted] = rule_memo_.emplace(op_index, default_rule(gaps));
    return it2->second;
}

const std::vector<double> &CircuitFunction::gate_gradients(const std::vector<double> &params,
                                                           DiffMode mode) const {
    std::pair<int, std::vector<double>> key{static_cast<int>(mode), params};
    auto it = grad_memo_.find(key);
    if (it != grad_memo_.end())
        return it->second;

    std::vector<double> grads(flat_.ops().size(), 0.0);
    if (mode == DiffMode::Adjoint) {
        if (!flat_.digital_only())
            throw AnalogBlockInAdjoint("adjoint differentiation supports digital gates only");
        const int n = flat_.n_qubits();
        StateVector psi = init_ ? *init_ : zero_state(n);
        flat_.apply(psi, params, values_);
        StateVector lambda(n);
        lambda.set_zero();
        for (const auto &t : obs_terms_)
            accumulate_pauli(lambda, psi, t);
        for (int k = static_cast<int>(flat_.ops().size()) - 1; k >= 0; --k) {
            const FlatOp &op = flat_.ops()[k];
            if (op.param) {
                PauliTerm term;
                const std::uint64_t bit = std::uint64_t(1) << (n - 1 - op.qubits[0]);
                switch (op.gate) {
                case GateKind::RX:
                    term.g = 1.0;
                    term.x_mask = bit;
                    grads[k] = cross_pauli(lambda, psi, term).imag();
                    break;
                case GateKind::RY:
                    term.g = cd(0, 1); // i^1 for the single Y
                    term.y_mask = bit;
                    grads[k] = cross_pauli(lambda, psi, term).imag();
                    break;
                case GateKind::RZ:
                    term.g = 1.0;
                    term.z_mask = bit;
                    grads[k] = cross_pauli(lambda, psi, term).imag();
                    break;
                case GateKind::CPHASE: {
                    const std::uint64_t mask =
                        bit | (std::uint64_t(1) << (n - 1 - op.qubits[1]));
                    cd s = 0.0;
                    for (std::size_t i = 0; i < psi.size(); ++i)
                        if ((i & mask) == mask)
                            s += std::conj(lambda[i]) * psi[i];
                    grads[k] = -2.0 * s.imag();
                    break;
                }
                default:
                    break;
                }
            }
            // un-apply U_k from both vectors
            const double inv = op.param ? -params[k] : 0.0;
            if (gate_is_parametric(op.gate)) {
                apply_gate(psi, op.gate, op.qubits, inv);
                apply_gate(lambda, op.gate, op.qubits, inv);
            } else {
                apply_gate(psi, op.gate, op.qubits, 0.0);
                apply_gate(lambda, op.gate, op.qubits, 0.0);
            }
        }
    } else if (mode == DiffMode::GPSR) {
        for (size_t k = 0; k < flat_.ops().size(); ++k) {
            if (!flat_.ops()[k].param)
                continue;
            double g = 0.0;
            for (const auto &[w, shift] : rule_for(static_cast<int>(k))) {
                std::vector<double> shifted = params;
                shifted[k] += shift;
                g += w * eval(shifted);
            }
            grads[k] = g;
        }
    } else {
        throw Error("gate-level gradients support GPSR and Adjoint modes");
    }
    auto [it2, inserted] = grad_memo_.emplace(std::move(key), std::move(grads));
    return it2->second;
}

// ---------------------------------------------------------------------------
// Gradient requests

namespace {

std::map<std::string, double> chain_rule_gradient(const CircuitFunction &fn,
                                                  const std::vector<std::string> &wrt,
                                                  DiffMode mode) {
    std::map<std::string, double> out;
    const auto &gg = fn.gate_gradients(fn.base(), mode);
    for (const auto &name : wrt) {
        double total = 0.0;
        for (int k : fn.occurrences(name))
            total += gg[k] * fn.chain_factor(k, name);
        out[name] = total;
    }
    return out;
}

std::map<std::string, double> fd_gradient(const CircuitFunction &fn,
                                          const std::vector<std::string> &wrt, double h) {
    std::map<std::string, double> out;
    for (const auto &name : wrt) {
        ParamMap plus = fn.values();
        ParamMap minus = fn.values();
        auto it = plus.find(name);
        if (it == plus.end()) {
            out[name] = 0.0; // absent parameter: constant circuit
            continue;
        }
        it->second += h;
        minus[name] -= h;
        out[name] = (fn.eval_values(plus) - fn.eval_values(minus)) / (2.0 * h);
    }
    return out;
}

} // namespace

GradientResult gradient(const GradientRequest &req) {
    GradientResult result;
    result.rows.reserve(req.values.size());
    for (const auto &values : req.values) {
        CircuitFunction fn(req.circuit, req.observable, values, req.state);
        if (req.mode == DiffMode::FD)
            result.rows.push_back(fd_gradient(fn, req.wrt, req.fd_step));
        else
            result.rows.push_back(chain_rule_gradient(fn, req.wrt, req.mode));
    }
    return result;
}

GradientResult gpsr_gradient(GradientRequest req) {
    req.mode = DiffMode::GPSR;
    return gradient(req);
}

GradientResult adjoint_gradient(GradientRequest req) {
    req.mode = DiffMode::Adjoint;
    return gradient(req);
}

GradientResult finite_diff_gradient(GradientRequest req, double h) {
    req.mode = DiffMode::FD;
    req.fd_step = h;
    return gradient(req);
}

// ---------------------------------------------------------------------------
// ShiftedSum

ShiftedSum::ShiftedSum(std::shared_ptr<CircuitFunction> fn) : fn_(std::move(fn)) {
    terms_.push_back({Expr(1.0), {}});
}

namespace {

bool is_zero_expr(const Expr &e) { return e.op() == Expr::Op::Const && e.constant() == 0.0; }

std::vector<double> shifted_params(const std::vector<double> &base,
                                   const std::map<int, double> &shifts) {
    std::vector<double> out = base;
    for (const auto &[k, s] : shifts)
        out[k] += s;
    return out;
}

} // namespace

ShiftedSum ShiftedSum::derivative(const std::string &wrt) const {
    std::vector<Term> out;
    const auto occ = fn_->occurrences(wrt);
    for (const auto &term : terms_) {
        Expr dw = term.weight.differentiate(wrt);
        if (!is_zero_expr(dw))
            out.push_back({dw, term.shifts});
        for (int k : occ) {
            const Expr chain = fn_->flat().ops()[k].param->differentiate(wrt);
            for (const auto &[w, shift] : fn_->rule_for(k)) {
                Term next{term.weight * chain * Expr(w), term.shifts};
                next.shifts[k] += shift;
                out.push_back(std::move(next));
            }
        }
    }
    return ShiftedSum(fn_, std::move(out));
}

double ShiftedSum::value() const {
    double total = 0.0;
    for (const auto &term : terms_)
        total += term.weight.evaluate(fn_->values()) *
                 fn_->eval(shifted_params(fn_->base(), term.shifts));
    return total;
}

double ShiftedSum::value_at(const ParamMap &values) const {
    double total = 0.0;
    for (const auto &term : terms_) {
        double w = term.weight.evaluate(values);
        if (w == 0.0)
            continue;
        total += w * fn_->eval_values(values, term.shifts);
    }
    return total;
}

std::map<std::string, double> ShiftedSum::gradient(const std::vector<std::string> &wrt,
                                                   DiffMode mode, double fd_step) const {
    std::map<std::string, double> out;
    for (const auto &name : wrt)
        out[name] = 0.0;
    if (mode == DiffMode::FD) {
        for (const auto &name : wrt) {
            ParamMap plus = fn_->values();
            ParamMap minus = fn_->values();
            auto it = plus.find(name);
            if (it == plus.end())
                continue;
            it->second += fd_step;
            minus[name] -= fd_step;
            out[name] = (value_at(plus) - value_at(minus)) / (2.0 * fd_step);
        }
        return out;
    }
    for (const auto &term : terms_) {
        const double w = term.weight.evaluate(fn_->values());
        const auto params = shifted_params(fn_->base(), term.shifts);
        const auto &gg = fn_->gate_gradients(params, mode);
        for (const auto &name : wrt) {
            double acc = 0.0;
            for (int k : fn_->occurrences(name))
                acc += gg[k] * fn_->chain_factor(k, name);
            Expr dw = term.weight.differentiate(name);
            double dw_part =
                is_zero_expr(dw) ? 0.0 : dw.evaluate(fn_->values()) * fn_->eval(params);
            out[name] += w * acc + dw_part;
        }
    }
    return out;
}

} // namespace daqsim
