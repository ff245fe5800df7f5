// SPDX-License-Identifier: Apache-2.0
#include "daqsim/expr.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace daqsim {

struct Expr::Node {
    Op op;
    std::vector<Expr> children;
    Parameter param;   // Op::Param
    double value = 0.0; // Op::Const
};

namespace {

const std::vector<Expr> kNoChildren;

} // namespace

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double constant) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = constant;
    node_ = std::move(n);
}

Expr::Expr(const Parameter &p) {
    auto n = std::make_shared<Node>();
    n->op = Op::Param;
    n->param = p;
    node_ = std::move(n);
}

Expr Expr::make(Op op, std::vector<Expr> children) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children = std::move(children);
    return Expr(std::move(n));
}

Expr::Op Expr::op() const { return node_->op; }

const std::vector<Expr> &Expr::children() const {
    return node_ ? node_->children : kNoChildren;
}

const Parameter &Expr::parameter() const { return node_->param; }

double Expr::constant() const { return node_->value; }

bool Expr::is_number() const {
    switch (op()) {
    case Op::Const:
        return true;
    case Op::Param:
        return node_->param.kind == ParamKind::Fixed;
    default:
        for (const auto &c : children())
            if (!c.is_number())
                return false;
        return true;
    }
}

double Expr::evaluate(const ParamMap &values) const {
    switch (op()) {
    case Op::Const:
        return node_->value;
    case Op::Param: {
        const Parameter &p = node_->param;
        if (p.kind == ParamKind::Fixed)
            return p.value;
        auto it = values.find(p.name);
        if (it == values.end())
            throw MissingParameter(p.name);
        return it->second;
    }
    case Op::Add:
        return children()[0].evaluate(values) + children()[1].evaluate(values);
    case Op::Mul:
        return children()[0].evaluate(values) * children()[1].evaluate(values);
    case Op::Pow: {
        double b = children()[0].evaluate(values);
        double e = children()[1].evaluate(values);
        if (b == 0.0 && e < 0.0)
            throw DomainError("0 raised to a negative power");
        if (b < 0.0 && e != std::floor(e))
            throw DomainError("negative base with non-integer exponent");
        return std::pow(b, e);
    }
    case Op::Neg:
        return -children()[0].evaluate(values);
    case Op::Sin:
        return std::sin(children()[0].evaluate(values));
    case Op::Cos:
        return std::cos(children()[0].evaluate(values));
    case Op::Acos: {
        double x = children()[0].evaluate(values);
        if (x < -1.0 || x > 1.0)
            throw DomainError("acos argument outside [-1, 1]");
        return std::acos(x);
    }
    case Op::Exp:
        return std::exp(children()[0].evaluate(values));
    case Op::Sqrt: {
        double x = children()[0].evaluate(values);
        if (x < 0.0)
            throw DomainError("sqrt of a negative value");
        return std::sqrt(x);
    }
    }
    throw Error("unreachable expression op");
}

namespace {

bool is_const(const Expr &e, double v) {
    return e.op() == Expr::Op::Const && e.constant() == v;
}

// Light folding only: identities with 0 and 1, and constant arithmetic.
Expr fold_add(const Expr &a, const Expr &b) {
    if (is_const(a, 0.0))
        return b;
    if (is_const(b, 0.0))
        return a;
    if (a.op() == Expr::Op::Const && b.op() == Expr::Op::Const)
        return Expr(a.constant() + b.constant());
    return a + b;
}

Expr fold_mul(const Expr &a, const Expr &b) {
    if (is_const(a, 0.0) || is_const(b, 0.0))
        return Expr(0.0);
    if (is_const(a, 1.0))
        return b;
    if (is_const(b, 1.0))
        return a;
    if (a.op() == Expr::Op::Const && b.op() == Expr::Op::Const)
        return Expr(a.constant() * b.constant());
    return a * b;
}

Expr fold_neg(const Expr &a) {
    if (a.op() == Expr::Op::Const)
        return Expr(-a.constant());
    return -a;
}

} // namespace

Expr Expr::differentiate(const std::string &wrt) const {
    switch (op()) {
    case Op::Const:
        return Expr(0.0);
    case Op::Param:
        if (node_->param.kind != ParamKind::Fixed && node_->param.name == wrt)
            return Expr(1.0);
        return Expr(0.0);
    case Op::Add:
        return fold_add(children()[0].differentiate(wrt), children()[1].differentiate(wrt));
    case Op::Mul: {
        const Expr &a = children()[0];
        const Expr &b = children()[1];
        return fold_add(fold_mul(a.differentiate(wrt), b), fold_mul(a, b.differentiate(wrt)));
    }
    case Op::Pow: {
        const Expr &base = children()[0];
        const Expr &e = children()[1];
        if (e.depends_on(wrt))
            throw DomainError("cannot differentiate a parameter-dependent exponent");
        // d(b^e) = e * b^(e-1) * b'
        Expr db = base.differentiate(wrt);
        Expr reduced = e.op() == Op::Const ? Expr(e.constant() - 1.0) : fold_add(e, Expr(-1.0));
        return fold_mul(fold_mul(e, pow(base, reduced)), db);
    }
    case Op::Neg:
        return fold_neg(children()[0].differentiate(wrt));
    case Op::Sin:
        return fold_mul(cos(children()[0]), children()[0].differentiate(wrt));
    case Op::Cos:
        return fold_neg(fold_mul(sin(children()[0]), children()[0].differentiate(wrt)));
    case Op::Acos: {
        const Expr &a = children()[0];
        // -a' / sqrt(1 - a^2)
        Expr denom = pow(fold_add(Expr(1.0), fold_neg(fold_mul(a, a))), Expr(-0.5));
        return fold_neg(fold_mul(a.differentiate(wrt), denom));
    }
    case Op::Exp:
        return fold_mul(exp(children()[0]), children()[0].differentiate(wrt));
    case Op::Sqrt: {
        const Expr &a = children()[0];
        return fold_mul(Expr(0.5), fold_mul(a.differentiate(wrt), pow(a, Expr(-0.5))));
    }
    }
    throw Error("unreachable expression op");
}

namespace {

void collect(const Expr &e, std::map<std::string, Parameter> &out) {
    if (e.op() == Expr::Op::Param) {
        const Parameter &p = e.parameter();
        auto [it, inserted] = out.emplace(p.name, p);
        if (!inserted && it->second.kind != p.kind)
            throw Error("parameter '" + p.name + "' used with two different kinds");
        return;
    }
    for (const auto &c : e.children())
        collect(c, out);
}

} // namespace

std::vector<Parameter> Expr::parameters() const {
    std::map<std::string, Parameter> found;
    collect(*this, found);
    std::vector<Parameter> out;
    out.reserve(found.size());
    for (auto &[name, p] : found)
        out.push_back(p);
    return out;
}

bool Expr::depends_on(const std::string &name) const {
    if (op() == Op::Param)
        return node_->param.name == name && node_->param.kind != ParamKind::Fixed;
    for (const auto &c : children())
        if (c.depends_on(name))
            return true;
    return false;
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string Expr::sexpr() const {
    switch (op()) {
    case Op::Const:
        return "(const " + fmt_double(constant()) + ")";
    case Op::Param: {
        const Parameter &p = parameter();
        switch (p.kind) {
        case ParamKind::Variational:
            return "(var " + p.name + ")";
        case ParamKind::Feature:
            return "(feat " + p.name + ")";
        case ParamKind::Fixed:
            return "(fixed " + p.name + " " + fmt_double(p.value) + ")";
        }
        break;
    }
    default:
        break;
    }
    static const char *names[] = {"param", "const", "add", "mul",  "pow", "neg",
                                  "sin",   "cos",   "acos", "exp", "sqrt"};
    std::string out = "(";
    out += names[static_cast<int>(op())];
    for (const auto &c : children()) {
        out += ' ';
        out += c.sexpr();
    }
    out += ')';
    return out;
}

Expr operator+(const Expr &a, const Expr &b) { return Expr::make(Expr::Op::Add, {a, b}); }
Expr operator*(const Expr &a, const Expr &b) { return Expr::make(Expr::Op::Mul, {a, b}); }
Expr operator-(const Expr &a) { return Expr::make(Expr::Op::Neg, {a}); }
Expr operator-(const Expr &a, const Expr &b) { return a + (-b); }

Expr pow(const Expr &base, const Expr &exponent) {
    return Expr::make(Expr::Op::Pow, {base, exponent});
}
Expr sin(const Expr &e) { return Expr::make(Expr::Op::Sin, {e}); }
Expr cos(const Expr &e) { return Expr::make(Expr::Op::Cos, {e}); }
Expr acos(const Expr &e) { return Expr::make(Expr::Op::Acos, {e}); }
Expr exp(const Expr &e) { return Expr::make(Expr::Op::Exp, {e}); }
Expr sqrt(const Expr &e) { return Expr::make(Expr::Op::Sqrt, {e}); }

} // namespace daqsim
