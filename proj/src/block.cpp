// SPDX-License-Identifier: Apache-2.0
#include "daqsim/block.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace daqsim {

struct Block::Node {
    Kind kind;
    GateKind gate = GateKind::I;
    std::vector<int> qubits;    // Primitive
    std::optional<Expr> angle;  // Primitive rotations
    std::optional<Expr> scalar; // HamEvo time / Scale coefficient
    std::vector<Block> children;
    std::string tag;
};

const char *gate_name(GateKind g) {
    static const char *names[] = {"X",  "Y",  "Z",      "H",    "N",  "I",
                                  "RX", "RY", "RZ", "CPHASE", "CNOT", "CZ"};
    return names[static_cast<int>(g)];
}

bool gate_is_parametric(GateKind g) {
    switch (g) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CPHASE:
        return true;
    default:
        return false;
    }
}

Block::Kind Block::kind() const { return node_->kind; }
const std::string &Block::tag() const { return node_->tag; }
GateKind Block::gate() const { return node_->gate; }
const std::vector<int> &Block::qubits() const { return node_->qubits; }
const std::optional<Expr> &Block::angle() const { return node_->angle; }
const Block &Block::generator() const { return node_->children[0]; }
const Expr &Block::time() const { return *node_->scalar; }
const Expr &Block::coeff() const { return *node_->scalar; }
const std::vector<Block> &Block::children() const { return node_->children; }

Block make_primitive(GateKind g, std::vector<int> qubits, std::optional<Expr> angle) {
    std::set<int> seen;
    for (int q : qubits) {
        if (q < 0)
            throw Error("qubit indices must be nonnegative");
        if (!seen.insert(q).second)
            throw DuplicateQubit("repeated qubit in gate support");
    }
    if (gate_is_parametric(g) != angle.has_value())
        throw Error(std::string(gate_name(g)) +
                    (angle ? " does not take an angle" : " requires an angle"));
    auto n = std::make_shared<Block::Node>();
    n->kind = Block::Kind::Primitive;
    n->gate = g;
    n->qubits = std::move(qubits);
    n->angle = std::move(angle);
    return Block(std::move(n));
}

Block X(int q) { return make_primitive(GateKind::X, {q}, std::nullopt); }
Block Y(int q) { return make_primitive(GateKind::Y, {q}, std::nullopt); }
Block Z(int q) { return make_primitive(GateKind::Z, {q}, std::nullopt); }
Block H(int q) { return make_primitive(GateKind::H, {q}, std::nullopt); }
Block N(int q) { return make_primitive(GateKind::N, {q}, std::nullopt); }
Block I(int q) { return make_primitive(GateKind::I, {q}, std::nullopt); }
Block RX(int q, const Expr &angle) { return make_primitive(GateKind::RX, {q}, angle); }
Block RY(int q, const Expr &angle) { return make_primitive(GateKind::RY, {q}, angle); }
Block RZ(int q, const Expr &angle) { return make_primitive(GateKind::RZ, {q}, angle); }
Block CPHASE(int control, int target, const Expr &angle) {
    return make_primitive(GateKind::CPHASE, {control, target}, angle);
}
Block CNOT(int control, int target) {
    return make_primitive(GateKind::CNOT, {control, target}, std::nullopt);
}
Block CZ(int control, int target) {
    return make_primitive(GateKind::CZ, {control, target}, std::nullopt);
}

namespace {

void collect_support(const Block &b, std::set<int> &out) {
    if (b.kind() == Block::Kind::Primitive) {
        out.insert(b.qubits().begin(), b.qubits().end());
        return;
    }
    for (const auto &c : b.children())
        collect_support(c, out);
}

} // namespace

std::vector<int> Block::qubit_support() const {
    std::set<int> s;
    collect_support(*this, s);
    return {s.begin(), s.end()};
}

Block compose(Block::Kind kind, std::vector<Block> blocks) {
    if (blocks.empty())
        throw EmptyComposition("cannot compose zero blocks");
    if (kind == Block::Kind::Kron) {
        std::set<int> used;
        for (const auto &b : blocks) {
            for (int q : b.qubit_support())
                if (!used.insert(q).second)
                    throw OverlappingSupport("kron children must act on disjoint qubits");
        }
    }
    auto n = std::make_shared<Block::Node>();
    n->kind = kind;
    n->children = std::move(blocks);
    return Block(std::move(n));
}

Block chain(std::vector<Block> blocks) { return compose(Block::Kind::Chain, std::move(blocks)); }
Block kron(std::vector<Block> blocks) { return compose(Block::Kind::Kron, std::move(blocks)); }
Block add(std::vector<Block> blocks) { return compose(Block::Kind::Add, std::move(blocks)); }

Block scale(const Expr &coeff, const Block &b) {
    auto n = std::make_shared<Block::Node>();
    n->kind = Block::Kind::Scale;
    n->scalar = coeff;
    n->children = {b};
    return Block(std::move(n));
}

namespace {

bool hermitian_representable(const Block &b) {
    switch (b.kind()) {
    case Block::Kind::Primitive:
        switch (b.gate()) {
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
        case GateKind::N:
        case GateKind::I:
            return true;
        default:
            return false;
        }
    case Block::Kind::Add:
    case Block::Kind::Kron:
    case Block::Kind::Scale:
        for (const auto &c : b.children())
            if (!hermitian_representable(c))
                return false;
        return true;
    default:
        return false;
    }
}

} // namespace

Block hamevo(const Block &generator, const Expr &time) {
    if (!hermitian_representable(generator))
        throw NonHermitianGenerator(
            "HamEvo generator must be an Add/Scale/Kron composition of X/Y/Z/N/I");
    auto n = std::make_shared<Block::Node>();
    n->kind = Block::Kind::HamEvo;
    n->scalar = time;
    n->children = {generator};
    return Block(std::move(n));
}

Block tag(const Block &b, std::string name) {
    auto n = std::make_shared<Block::Node>(*b.node_);
    n->tag = std::move(name);
    return Block(std::move(n));
}

Block dagger(const Block &b) {
    switch (b.kind()) {
    case Block::Kind::Primitive:
        if (gate_is_parametric(b.gate()))
            return make_primitive(b.gate(), b.qubits(), -*b.angle());
        return b; // X, Y, Z, H, N, I, CNOT, CZ are self-adjoint
    case Block::Kind::HamEvo:
        return hamevo(b.generator(), -b.time());
    case Block::Kind::Chain: {
        std::vector<Block> rev(b.children().rbegin(), b.children().rend());
        for (auto &c : rev)
            c = dagger(c);
        return chain(std::move(rev));
    }
    case Block::Kind::Kron:
    case Block::Kind::Add: {
        std::vector<Block> out = b.children();
        for (auto &c : out)
            c = dagger(c);
        return compose(b.kind(), std::move(out));
    }
    case Block::Kind::Scale:
        return scale(b.coeff(), dagger(b.children()[0]));
    }
    throw Error("unreachable block kind");
}

namespace {

void collect_params(const Block &b, std::map<std::string, Parameter> &out) {
    auto merge = [&out](const Expr &e) {
        for (const auto &p : e.parameters()) {
            auto [it, inserted] = out.emplace(p.name, p);
            if (!inserted && it->second.kind != p.kind)
                throw Error("parameter '" + p.name + "' used with two different kinds");
        }
    };
    switch (b.kind()) {
    case Block::Kind::Primitive:
        if (b.angle())
            merge(*b.angle());
        break;
    case Block::Kind::HamEvo:
        merge(b.time());
        collect_params(b.generator(), out);
        break;
    case Block::Kind::Scale:
        merge(b.coeff());
        collect_params(b.children()[0], out);
        break;
    default:
        for (const auto &c : b.children())
            collect_params(c, out);
    }
}

} // namespace

std::vector<Parameter> Block::parameters() const {
    std::map<std::string, Parameter> found;
    collect_params(*this, found);
    std::vector<Parameter> out;
    out.reserve(found.size());
    for (auto &[name, p] : found)
        out.push_back(p);
    return out;
}

namespace {

std::string node_label(const Block &b) {
    std::ostringstream os;
    switch (b.kind()) {
    case Block::Kind::Primitive: {
        os << gate_name(b.gate()) << '(';
        for (size_t i = 0; i < b.qubits().size(); ++i)
            os << (i ? ", " : "") << b.qubits()[i];
        if (b.angle())
            os << ", " << b.angle()->sexpr();
        os << ')';
        break;
    }
    case Block::Kind::HamEvo:
        os << "HamEvo(t = " << b.time().sexpr() << ')';
        break;
    case Block::Kind::Chain:
        os << "ChainBlock";
        break;
    case Block::Kind::Kron:
        os << "KronBlock";
        break;
    case Block::Kind::Add:
        os << "AddBlock";
        break;
    case Block::Kind::Scale:
        os << "ScaleBlock(" << b.coeff().sexpr() << ')';
        break;
    }
    if (!b.tag().empty())
        os << " [tag: \"" << b.tag() << "\"]";
    return os.str();
}

void render(const Block &b, const std::string &prefix, bool last, bool root, std::string &out) {
    if (root) {
        out += node_label(b) + "\n";
    } else {
        out += prefix + (last ? "└── " : "├── ") + node_label(b) + "\n";
    }
    std::vector<Block> kids = b.children();
    if (b.kind() == Block::Kind::HamEvo)
        kids = {b.generator()};
    std::string child_prefix = root ? "" : prefix + (last ? "    " : "│   ");
    for (size_t i = 0; i < kids.size(); ++i)
        render(kids[i], child_prefix, i + 1 == kids.size(), false, out);
}

} // namespace

std::string Block::tree_string() const {
    std::string out;
    render(*this, "", true, true, out);
    return out;
}

Block qft(const std::vector<int> &support) {
    if (support.empty())
        throw EmptyComposition("qft needs at least one qubit");
    std::set<int> seen(support.begin(), support.end());
    if (seen.size() != support.size())
        throw DuplicateQubit("qft support has repeated qubits");
    const int m = static_cast<int>(support.size());
    std::vector<Block> layers;
    for (int l = 0; l < m; ++l) {
        std::vector<Block> ops{H(support[l])};
        for (int j = l + 1; j < m; ++j)
            ops.push_back(
                CPHASE(support[j], support[l], Expr(std::numbers::pi / std::exp2(j - l))));
        layers.push_back(chain(std::move(ops)));
    }
    return tag(chain(std::move(layers)), "QFT");
}

Block hea(int n_qubits, int depth) {
    if (n_qubits < 2 || depth < 1)
        throw Error("hea requires n_qubits >= 2 and depth >= 1");
    auto pname = [](int layer, int qubit, int rot) {
        return "theta_" + std::to_string(layer) + "_" + std::to_string(qubit) + "_" +
               std::to_string(rot);
    };
    std::vector<Block> layers;
    for (int l = 0; l < depth; ++l) {
        std::vector<Block> rx0, ry1, rx2;
        for (int q = 0; q < n_qubits; ++q) {
            rx0.push_back(RX(q, Parameter::variational(pname(l, q, 0))));
            ry1.push_back(RY(q, Parameter::variational(pname(l, q, 1))));
            rx2.push_back(RX(q, Parameter::variational(pname(l, q, 2))));
        }
        std::vector<Block> ladder;
        for (int q = 0; q + 1 < n_qubits; ++q)
            ladder.push_back(CNOT(q, q + 1));
        layers.push_back(chain(kron(std::move(rx0)), kron(std::move(ry1)),
                               kron(std::move(rx2)), chain(std::move(ladder))));
    }
    return tag(chain(std::move(layers)), "HEA");
}

Block feature_map(int n_qubits, const std::string &param, FeatureMapType fm_type,
                  std::optional<std::vector<int>> support) {
    std::vector<int> qs;
    if (support) {
        qs = *support;
    } else {
        qs.resize(n_qubits);
        for (int q = 0; q < n_qubits; ++q)
            qs[q] = q;
    }
    if (qs.empty())
        throw EmptyComposition("feature map needs at least one qubit");
    Expr leaf{Parameter::feature(param)};
    Expr angle = fm_type == FeatureMapType::Chebyshev ? acos(leaf) : leaf;
    std::vector<Block> rots;
    rots.reserve(qs.size());
    for (int q : qs)
        rots.push_back(RX(q, angle));
    return tag(kron(std::move(rots)), "FM(" + param + ")");
}

QuantumCircuit::QuantumCircuit(Register reg, Block block)
    : reg_(std::move(reg)), block_(std::move(block)) {
    auto support = block_.qubit_support();
    if (!support.empty() && support.back() >= reg_.n_qubits())
        throw Error("block acts on qubits outside the register");
}

QuantumCircuit::QuantumCircuit(int n_qubits, Block block)
    : QuantumCircuit(Register::line(n_qubits), std::move(block)) {}

} // namespace daqsim
