// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Symbolic scalar expressions used as gate/Hamiltonian parameters.
 *
 * An Expr is an immutable tree over parameter leaves (fixed, variational or
 * feature), real constants, arithmetic nodes and the small set of
 * transcendental functions needed for feature embeddings (sin, cos, acos,
 * exp, sqrt, pow). Trees support numeric evaluation against a name->value
 * map and analytic differentiation with respect to a leaf parameter.
 */
#pragma once

#include "daqsim/errors.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace daqsim {

using ParamMap = std::map<std::string, double>;

enum class ParamKind { Fixed, Variational, Feature };

struct Parameter {
    std::string name;
    ParamKind kind = ParamKind::Variational;
    double value = 0.0; // only meaningful for Fixed

    static Parameter variational(std::string name) {
        return {std::move(name), ParamKind::Variational, 0.0};
    }
    static Parameter feature(std::string name) {
        return {std::move(name), ParamKind::Feature, 0.0};
    }
    static Parameter fixed(std::string name, double value) {
        return {std::move(name), ParamKind::Fixed, value};
    }

    friend bool operator==(const Parameter &a, const Parameter &b) {
        return a.name == b.name && a.kind == b.kind;
    }
    friend bool operator<(const Parameter &a, const Parameter &b) {
        return a.name < b.name;
    }
};

class Expr {
  public:
    enum class Op { Param, Const, Add, Mul, Pow, Neg, Sin, Cos, Acos, Exp, Sqrt };

    /// Zero constant.
    Expr();
    Expr(double constant);
    Expr(int constant) : Expr(static_cast<double>(constant)) {}
    Expr(const Parameter &p);
    // Bare strings auto-promote to variational parameters.
    Expr(const std::string &name) : Expr(Parameter::variational(name)) {}
    Expr(const char *name) : Expr(Parameter::variational(name)) {}

    Op op() const;
    /// Children of this node (empty for leaves).
    const std::vector<Expr> &children() const;
    /// Leaf accessors; only valid for the corresponding Op.
    const Parameter &parameter() const;
    double constant() const;

    double evaluate(const ParamMap &values) const;
    Expr differentiate(const std::string &wrt) const;
    /// Distinct leaf parameters, classified by kind; throws if one name
    /// appears with two different kinds.
    std::vector<Parameter> parameters() const;
    bool depends_on(const std::string &name) const;
    /// True when the tree contains no variational/feature leaves.
    bool is_number() const;

    /// Canonical S-expression form, e.g. (mul (acos (add (var theta) (feat phi))) (const 3.14)).
    std::string sexpr() const;

    friend Expr operator+(const Expr &a, const Expr &b);
    friend Expr operator*(const Expr &a, const Expr &b);
    friend Expr operator-(const Expr &a);
    friend Expr operator-(const Expr &a, const Expr &b);

    friend bool same_node(const Expr &a, const Expr &b) { return a.node_ == b.node_; }

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr make(Op op, std::vector<Expr> children);
    std::shared_ptr<const Node> node_;

    friend Expr pow(const Expr &base, const Expr &exponent);
    friend Expr sin(const Expr &e);
    friend Expr cos(const Expr &e);
    friend Expr acos(const Expr &e);
    friend Expr exp(const Expr &e);
    friend Expr sqrt(const Expr &e);
};

Expr pow(const Expr &base, const Expr &exponent);
Expr sin(const Expr &e);
Expr cos(const Expr &e);
Expr acos(const Expr &e);
Expr exp(const Expr &e);
Expr sqrt(const Expr &e);

} // namespace daqsim
