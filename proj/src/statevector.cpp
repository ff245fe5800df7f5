// SPDX-License-Identifier: Apache-2.0
#include "daqsim/statevector.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace daqsim {

namespace {

std::atomic<long long> g_state_allocations{0};

constexpr int kDenseQubitCap = 12;

std::uint64_t qubit_bit(int q, int n) { return std::uint64_t(1) << (n - 1 - q); }

} // namespace

StateVector::StateVector(int n_qubits)
    : n_qubits_(n_qubits), amps_(std::size_t(1) << n_qubits, cd(0.0, 0.0)) {
    amps_[0] = 1.0;
    g_state_allocations.fetch_add(1, std::memory_order_relaxed);
}

StateVector::StateVector(const StateVector &other)
    : n_qubits_(other.n_qubits_), amps_(other.amps_) {
    g_state_allocations.fetch_add(1, std::memory_order_relaxed);
}

StateVector &StateVector::operator=(const StateVector &other) {
    if (this != &other) {
        if (amps_.size() != other.amps_.size())
            g_state_allocations.fetch_add(1, std::memory_order_relaxed);
        n_qubits_ = other.n_qubits_;
        amps_ = other.amps_;
    }
    return *this;
}

double StateVector::norm() const {
    return std::sqrt(kernels::active().norm2(amps_.data(), amps_.size()));
}

void StateVector::set_zero() { std::fill(amps_.begin(), amps_.end(), cd(0.0, 0.0)); }

long long StateVector::allocations() { return g_state_allocations.load(std::memory_order_relaxed); }

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

StateVector product_state(const std::string &bitstring) {
    if (bitstring.empty())
        throw BadBitstring("empty bitstring");
    const int n = static_cast<int>(bitstring.size());
    std::size_t index = 0;
    for (int q = 0; q < n; ++q) {
        char c = bitstring[q];
        if (c != '0' && c != '1')
            throw BadBitstring("bitstring may contain only '0' and '1'");
        if (c == '1')
            index |= qubit_bit(q, n);
    }
    StateVector psi(n);
    psi[0] = 0.0;
    psi[index] = 1.0;
    return psi;
}

// ---------------------------------------------------------------------------
// Pauli-sum flattening

namespace {

struct RawTerm {
    cd coeff;
    std::map<int, char> paulis; // qubit -> 'X' | 'Y' | 'Z'
};

// left * right for single-qubit Paulis; returns (phase, pauli or 0 for I).
std::pair<cd, char> pauli_mul(char left, char right) {
    if (left == right)
        return {1.0, 0};
    static const std::string ops = "XYZ";
    // XY=iZ, YZ=iX, ZX=iY and anti-symmetric counterparts.
    int l = static_cast<int>(ops.find(left));
    int r = static_cast<int>(ops.find(right));
    char out = ops[3 - l - r];
    bool cyclic = (r == (l + 1) % 3);
    return {cyclic ? cd(0, 1) : cd(0, -1), out};
}

std::vector<RawTerm> flatten_raw(const Block &b, const ParamMap &values) {
    switch (b.kind()) {
    case Block::Kind::Primitive: {
        const int q = b.qubits().empty() ? 0 : b.qubits()[0];
        switch (b.gate()) {
        case GateKind::X:
            return {{1.0, {{q, 'X'}}}};
        case GateKind::Y:
            return {{1.0, {{q, 'Y'}}}};
        case GateKind::Z:
            return {{1.0, {{q, 'Z'}}}};
        case GateKind::I:
            return {{1.0, {}}};
        case GateKind::N: // (I - Z)/2
            return {{0.5, {}}, {-0.5, {{q, 'Z'}}}};
        case GateKind::H: // (X + Z)/sqrt(2)
            return {{std::numbers::sqrt2 / 2.0, {{q, 'X'}}},
                    {std::numbers::sqrt2 / 2.0, {{q, 'Z'}}}};
        default:
            throw NonHermitianObservable("observables support X/Y/Z/N/I/H primitives only");
        }
    }
    case Block::Kind::Scale: {
        double c = b.coeff().evaluate(values);
        auto terms = flatten_raw(b.children()[0], values);
        for (auto &t : terms)
            t.coeff *= c;
        return terms;
    }
    case Block::Kind::Add: {
        std::vector<RawTerm> out;
        for (const auto &child : b.children()) {
            auto terms = flatten_raw(child, values);
            out.insert(out.end(), terms.begin(), terms.end());
        }
        return out;
    }
    case Block::Kind::Kron:
    case Block::Kind::Chain: {
        // Operator product; chain(A,B) means B*A as matrices, so fold right
        // factors onto the accumulated product from the left.
        std::vector<RawTerm> acc{{1.0, {}}};
        for (const auto &child : b.children()) {
            auto terms = flatten_raw(child, values);
            std::vector<RawTerm> next;
            next.reserve(acc.size() * terms.size());
            for (const auto &t : terms) // t is applied after a
                for (const auto &a : acc) {
                    RawTerm merged{t.coeff * a.coeff, t.paulis};
                    for (const auto &[q, p] : a.paulis) {
                        auto it = merged.paulis.find(q);
                        if (it == merged.paulis.end()) {
                            merged.paulis.emplace(q, p);
                        } else {
                            auto [phase, out] = pauli_mul(it->second, p);
                            merged.coeff *= phase;
                            if (out == 0)
                                merged.paulis.erase(it);
                            else
                                it->second = out;
                        }
                    }
                    next.push_back(std::move(merged));
                }
            acc = std::move(next);
        }
        return acc;
    }
    case Block::Kind::HamEvo:
        throw NonHermitianObservable("HamEvo blocks cannot appear inside observables");
    }
    throw Error("unreachable block kind");
}

} // namespace

std::vector<PauliTerm> flatten_pauli_sum(const Block &b, int n_qubits, const ParamMap &values) {
    auto raw = flatten_raw(b, values);
    // Merge identical Pauli products and check the result is Hermitian.
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, cd> merged;
    for (const auto &t : raw) {
        std::uint64_t xm = 0, ym = 0, zm = 0;
        for (const auto &[q, p] : t.paulis) {
            if (q >= n_qubits)
                throw Error("observable acts outside the register");
            std::uint64_t bit = qubit_bit(q, n_qubits);
            if (p == 'X')
                xm |= bit;
            else if (p == 'Y')
                ym |= bit;
            else
                zm |= bit;
        }
        merged[{xm, ym, zm}] += t.coeff;
    }
    std::vector<PauliTerm> out;
    out.reserve(merged.size());
    for (const auto &[masks, coeff] : merged) {
        if (std::abs(coeff.imag()) > 1e-12 * (1.0 + std::abs(coeff.real())))
            throw NonHermitianObservable("Pauli sum has a complex coefficient");
        if (coeff == cd(0.0, 0.0))
            continue;
        auto [xm, ym, zm] = masks;
        PauliTerm term;
        term.x_mask = xm;
        term.y_mask = ym;
        term.z_mask = zm;
        term.g = kernels::apply_i_power(cd(coeff.real(), 0.0), std::popcount(ym));
        out.push_back(term);
    }
    return out;
}

cd cross_pauli(const StateVector &bra, const StateVector &ket, const PauliTerm &term) {
    const std::uint64_t flip = term.x_mask | term.y_mask;
    const std::uint64_t signs = term.y_mask | term.z_mask;
    const cd *a = bra.data();
    const cd *b = ket.data();
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < ket.size(); ++i) {
        cd v = std::conj(a[i ^ flip]) * b[i];
        if (std::popcount(i & signs) & 1)
            v = -v;
        re += v.real();
        im += v.imag();
    }
    return term.g * cd(re, im);
}

cd expect_pauli(const StateVector &psi, const PauliTerm &term) {
    return cross_pauli(psi, psi, term);
}

void accumulate_pauli(StateVector &dst, const StateVector &src, const PauliTerm &term) {
    kernels::active().accumulate_pauli(dst.data(), src.data(), src.size(), term.g, term.x_mask,
                                       term.y_mask, term.z_mask);
}

// ---------------------------------------------------------------------------
// Evolution cache

namespace {

void collect_coeffs(const Block &b, const ParamMap &values, std::vector<double> &out) {
    switch (b.kind()) {
    case Block::Kind::Scale:
        out.push_back(b.coeff().evaluate(values));
        collect_coeffs(b.children()[0], values, out);
        break;
    case Block::Kind::HamEvo:
        out.push_back(b.time().evaluate(values));
        collect_coeffs(b.generator(), values, out);
        break;
    case Block::Kind::Primitive:
        if (b.angle())
            out.push_back(b.angle()->evaluate(values));
        break;
    default:
        for (const auto &c : b.children())
            collect_coeffs(c, values, out);
    }
}

Block remap_qubits(const Block &b, const std::map<int, int> &to_local) {
    switch (b.kind()) {
    case Block::Kind::Primitive: {
        std::vector<int> qs;
        qs.reserve(b.qubits().size());
        for (int q : b.qubits())
            qs.push_back(to_local.at(q));
        return make_primitive(b.gate(), std::move(qs), b.angle());
    }
    case Block::Kind::HamEvo:
        return hamevo(remap_qubits(b.generator(), to_local), b.time());
    case Block::Kind::Scale:
        return scale(b.coeff(), remap_qubits(b.children()[0], to_local));
    default: {
        std::vector<Block> kids = b.children();
        for (auto &c : kids)
            c = remap_qubits(c, to_local);
        return compose(b.kind(), std::move(kids));
    }
    }
}

} // namespace

std::shared_ptr<const EvoCache::Entry> EvoCache::get(const Block &generator,
                                                     const ParamMap &values) {
    std::vector<double> coeffs;
    collect_coeffs(generator, values, coeffs);
    std::pair<const void *, std::vector<double>> key{generator.node_id(), coeffs};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end())
            return it->second;
    }

    auto entry = std::make_shared<Entry>();
    entry->generator = generator;
    entry->support = generator.qubit_support();
    if (entry->support.empty())
        entry->support = {0};
    const int k = static_cast<int>(entry->support.size());
    if (k > kDenseQubitCap)
        throw TooManyQubitsForDense("generator support exceeds the dense cap of 12 qubits");
    std::map<int, int> to_local;
    for (int r = 0; r < k; ++r)
        to_local[entry->support[r]] = r;
    Block local = remap_qubits(generator, to_local);
    auto terms = flatten_pauli_sum(local, k, values);

    const std::size_t dim = std::size_t(1) << k;
    bool diagonal = std::all_of(terms.begin(), terms.end(),
                                [](const PauliTerm &t) { return t.diagonal(); });
    if (diagonal) {
        entry->diagonal = true;
        entry->diag.assign(dim, 0.0);
        for (const auto &t : terms) {
            for (std::size_t i = 0; i < dim; ++i) {
                double v = t.g.real();
                if (std::popcount(i & t.z_mask) & 1)
                    v = -v;
                entry->diag[i] += v;
            }
        }
    } else {
        Eigen::MatrixXcd m = to_matrix(local, k, values);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
        if (solver.info() != Eigen::Success)
            throw Error("eigendecomposition of the generator failed");
        entry->vecs = solver.eigenvectors();
        entry->vals = solver.eigenvalues();
    }

    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = map_.emplace(std::move(key), std::move(entry));
    return it->second;
}

EvoCache &evo_cache() {
    static EvoCache cache;
    return cache;
}

void apply_dense_on_support(StateVector &psi, const Eigen::MatrixXcd &u,
                            const std::vector<int> &qubits) {
    const int n = psi.n_qubits();
    const int k = static_cast<int>(qubits.size());
    const std::size_t dim = std::size_t(1) << k;
    std::uint64_t support_mask = 0;
    std::vector<std::uint64_t> pattern(dim, 0);
    for (int r = 0; r < k; ++r) {
        std::uint64_t bit = qubit_bit(qubits[r], n);
        support_mask |= bit;
        for (std::size_t l = 0; l < dim; ++l)
            if ((l >> (k - 1 - r)) & 1)
                pattern[l] |= bit;
    }
    Eigen::VectorXcd in(dim), out(dim);
    for (std::size_t base = 0; base < psi.size(); ++base) {
        if (base & support_mask)
            continue;
        for (std::size_t l = 0; l < dim; ++l)
            in[static_cast<Eigen::Index>(l)] = psi[base | pattern[l]];
        out.noalias() = u * in;
        for (std::size_t l = 0; l < dim; ++l)
            psi[base | pattern[l]] = out[static_cast<Eigen::Index>(l)];
    }
}

// ---------------------------------------------------------------------------
// Gate application

namespace {

void gate_matrix2(GateKind g, double angle, cd *m) {
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    switch (g) {
    case GateKind::X:
        m[0] = 0; m[1] = 1; m[2] = 1; m[3] = 0;
        break;
    case GateKind::Y:
        m[0] = 0; m[1] = cd(0, -1); m[2] = cd(0, 1); m[3] = 0;
        break;
    case GateKind::Z:
        m[0] = 1; m[1] = 0; m[2] = 0; m[3] = -1;
        break;
    case GateKind::H: {
        const double r = std::numbers::sqrt2 / 2.0;
        m[0] = r; m[1] = r; m[2] = r; m[3] = -r;
        break;
    }
    case GateKind::N:
        m[0] = 0; m[1] = 0; m[2] = 0; m[3] = 1;
        break;
    case GateKind::I:
        m[0] = 1; m[1] = 0; m[2] = 0; m[3] = 1;
        break;
    case GateKind::RX:
        m[0] = c; m[1] = cd(0, -s); m[2] = cd(0, -s); m[3] = c;
        break;
    case GateKind::RY:
        m[0] = c; m[1] = -s; m[2] = s; m[3] = c;
        break;
    case GateKind::RZ:
        m[0] = cd(c, -s); m[1] = 0; m[2] = 0; m[3] = cd(c, s);
        break;
    default:
        throw Error("not a single-qubit gate");
    }
}

} // namespace

void apply_gate(StateVector &psi, GateKind gate, const std::vector<int> &qubits, double angle) {
    const int n = psi.n_qubits();
    const auto &ops = kernels::active();
    switch (gate) {
    case GateKind::CNOT: {
        static const cd x_mat[4] = {0, 1, 1, 0};
        ops.apply_controlled_matrix2(psi.data(), psi.size(), n - 1 - qubits[0], n - 1 - qubits[1],
                                     x_mat);
        return;
    }
    case GateKind::CZ:
        ops.apply_masked_phase(psi.data(), psi.size(),
                               qubit_bit(qubits[0], n) | qubit_bit(qubits[1], n), cd(-1.0, 0.0));
        return;
    case GateKind::CPHASE:
        ops.apply_masked_phase(psi.data(), psi.size(),
                               qubit_bit(qubits[0], n) | qubit_bit(qubits[1], n),
                               std::polar(1.0, angle));
        return;
    default: {
        cd m[4];
        gate_matrix2(gate, angle, m);
        ops.apply_matrix2(psi.data(), psi.size(), n - 1 - qubits[0], m);
        return;
    }
    }
}

void apply_hamevo(StateVector &psi, const Block &generator, double t, const ParamMap &values) {
    auto entry = evo_cache().get(generator, values);
    const std::size_t dim = std::size_t(1) << entry->support.size();
    if (entry->diagonal) {
        const int n = psi.n_qubits();
        const int k = static_cast<int>(entry->support.size());
        std::vector<cd> phases(dim);
        for (std::size_t l = 0; l < dim; ++l)
            phases[l] = std::polar(1.0, -t * entry->diag[l]);
        std::vector<std::uint64_t> gbits(k);
        for (int r = 0; r < k; ++r)
            gbits[r] = qubit_bit(entry->support[r], n);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            std::size_t local = 0;
            for (int r = 0; r < k; ++r)
                local = (local << 1) | ((i & gbits[r]) ? 1 : 0);
            psi[i] *= phases[local];
        }
        return;
    }
    Eigen::VectorXcd phases =
        (cd(0, -1) * t * entry->vals.cast<cd>().array()).exp().matrix();
    Eigen::MatrixXcd u = entry->vecs * phases.asDiagonal() * entry->vecs.adjoint();
    apply_dense_on_support(psi, u, entry->support);
}

void apply_unitary(StateVector &psi, const Block &b, const ParamMap &values) {
    switch (b.kind()) {
    case Block::Kind::Primitive: {
        if (b.gate() == GateKind::N)
            throw NonUnitaryBlockInCircuit("N is not unitary; use it inside generators");
        double angle = b.angle() ? b.angle()->evaluate(values) : 0.0;
        apply_gate(psi, b.gate(), b.qubits(), angle);
        return;
    }
    case Block::Kind::HamEvo:
        apply_hamevo(psi, b.generator(), b.time().evaluate(values), values);
        return;
    case Block::Kind::Chain:
    case Block::Kind::Kron:
        for (const auto &c : b.children())
            apply_unitary(psi, c, values);
        return;
    case Block::Kind::Add:
    case Block::Kind::Scale:
        throw NonUnitaryBlockInCircuit(
            "Add/Scale blocks are only legal inside HamEvo generators and observables");
    }
}

void apply_linear(StateVector &psi, const Block &b, const ParamMap &values) {
    switch (b.kind()) {
    case Block::Kind::Primitive: {
        const int n = psi.n_qubits();
        if (b.gate() == GateKind::CNOT || b.gate() == GateKind::CZ ||
            b.gate() == GateKind::CPHASE) {
            double angle = b.angle() ? b.angle()->evaluate(values) : 0.0;
            apply_gate(psi, b.gate(), b.qubits(), angle);
        } else {
            cd m[4];
            gate_matrix2(b.gate(), b.angle() ? b.angle()->evaluate(values) : 0.0, m);
            kernels::active().apply_matrix2(psi.data(), psi.size(), n - 1 - b.qubits()[0], m);
        }
        return;
    }
    case Block::Kind::HamEvo:
        apply_hamevo(psi, b.generator(), b.time().evaluate(values), values);
        return;
    case Block::Kind::Chain:
    case Block::Kind::Kron:
        for (const auto &c : b.children())
            apply_linear(psi, c, values);
        return;
    case Block::Kind::Scale: {
        apply_linear(psi, b.children()[0], values);
        const cd c = b.coeff().evaluate(values);
        for (std::size_t i = 0; i < psi.size(); ++i)
            psi[i] *= c;
        return;
    }
    case Block::Kind::Add: {
        StateVector acc(psi.n_qubits());
        acc.set_zero();
        for (const auto &child : b.children()) {
            StateVector tmp = psi;
            apply_linear(tmp, child, values);
            for (std::size_t i = 0; i < psi.size(); ++i)
                acc[i] += tmp[i];
        }
        psi = std::move(acc);
        return;
    }
    }
}

StateVector run(const QuantumCircuit &circuit, const ParamMap &values,
                std::optional<StateVector> state) {
    StateVector psi = state ? std::move(*state) : zero_state(circuit.n_qubits());
    if (psi.n_qubits() != circuit.n_qubits())
        throw Error("initial state size does not match the register");
    apply_unitary(psi, circuit.block(), values);
    return psi;
}

SampleCounts sample_state(const StateVector &psi, long long n_shots, std::uint64_t seed) {
    const int n = psi.n_qubits();
    std::vector<double> cumulative(psi.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        acc += std::norm(psi[i]);
        cumulative[i] = acc;
    }
    const double total = acc;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, total);
    std::map<std::size_t, long long> hits;
    for (long long s = 0; s < n_shots; ++s) {
        double u = unif(rng);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t idx = std::min<std::size_t>(it - cumulative.begin(), psi.size() - 1);
        ++hits[idx];
    }
    SampleCounts counts;
    for (const auto &[idx, count] : hits) {
        std::string bits(n, '0');
        for (int q = 0; q < n; ++q)
            if (idx & qubit_bit(q, n))
                bits[q] = '1';
        counts[bits] = count;
    }
    return counts;
}

SampleCounts sample(const QuantumCircuit &circuit, const ParamMap &values, long long n_shots,
                    std::uint64_t seed, std::optional<StateVector> state) {
    if (n_shots < 1)
        throw Error("n_shots must be >= 1");
    StateVector psi = run(circuit, values, std::move(state));
    return sample_state(psi, n_shots, seed);
}

namespace {

double expectation_of_state(const StateVector &psi, const std::vector<PauliTerm> &terms) {
    cd total = 0.0;
    for (const auto &t : terms)
        total += expect_pauli(psi, t);
    if (std::abs(total.imag()) > 1e-10 * (1.0 + std::abs(total.real())))
        throw NonHermitianObservable("expectation has a non-vanishing imaginary part");
    return total.real();
}

} // namespace

double expectation(const QuantumCircuit &circuit, const Block &observable, const ParamMap &values,
                   std::optional<StateVector> state) {
    StateVector psi = run(circuit, values, std::move(state));
    auto terms = flatten_pauli_sum(observable, circuit.n_qubits(), values);
    return expectation_of_state(psi, terms);
}

std::vector<std::vector<double>> expectation_batch(const QuantumCircuit &circuit,
                                                   const std::vector<Block> &observables,
                                                   const std::vector<ParamMap> &batch,
                                                   std::optional<StateVector> state) {
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    for (const auto &values : batch) {
        StateVector psi = run(circuit, values, state);
        std::vector<double> row;
        row.reserve(observables.size());
        for (const auto &obs : observables) {
            auto terms = flatten_pauli_sum(obs, circuit.n_qubits(), values);
            row.push_back(expectation_of_state(psi, terms));
        }
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::MatrixXcd to_matrix(const Block &b, int n_qubits, const ParamMap &values) {
    if (n_qubits > kDenseQubitCap)
        throw TooManyQubitsForDense("to_matrix is capped at 12 qubits");
    const std::size_t dim = std::size_t(1) << n_qubits;
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector psi(n_qubits);
        psi[0] = 0.0;
        psi[col] = 1.0;
        apply_linear(psi, b, values);
        for (std::size_t row = 0; row < dim; ++row)
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = psi[row];
    }
    return m;
}

std::string state_to_csv(const StateVector &psi) {
    std::string out = "index,re,im\n";
    char buf[80];
    for (std::size_t i = 0; i < psi.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, psi[i].real(), psi[i].imag());
        out += buf;
    }
    return out;
}

std::string counts_to_json(const SampleCounts &counts) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[bits, count] : counts)
        j[bits] = count;
    return j.dump();
}

} // namespace daqsim
