// SPDX-License-Identifier: Apache-2.0
#include "daqsim/daqc.hpp"

#include "daqsim/statevector.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <bit>
#include <cmath>
#include <numbers>

namespace daqsim {

AnalogOp AnalogRX(const Expr &angle) { return {AnalogKind::RX, angle, {}, {}, {}, {}}; }
AnalogOp AnalogRY(const Expr &angle) { return {AnalogKind::RY, angle, {}, {}, {}, {}}; }
AnalogOp AnalogRZ(const Expr &angle) { return {AnalogKind::RZ, angle, {}, {}, {}, {}}; }
AnalogOp AnalogRot(const Expr &omega, const Expr &delta, const Expr &phase,
                   const Expr &duration) {
    return {AnalogKind::Rot, {}, omega, delta, phase, duration};
}
AnalogOp AnalogInteraction(const Expr &duration) {
    return {AnalogKind::Interaction, {}, {}, {}, {}, duration};
}

Block lower_analog(const AnalogOp &op, const Register &reg, const RydbergParams &base,
                   Strategy strategy) {
    if (strategy != Strategy::BDAQC)
        throw UnsupportedStrategy("analog operations support only the banged (always-on) strategy");
    RydbergParams p = base;
    Expr duration{0.0};
    const char *name = "AnalogOp";
    switch (op.kind) {
    case AnalogKind::RX:
        p.delta = Expr(0.0);
        p.phi = Expr(0.0);
        duration = *op.angle * pow(p.omega, Expr(-1.0));
        name = "AnalogRX";
        break;
    case AnalogKind::RY:
        p.delta = Expr(0.0);
        p.phi = Expr(-std::numbers::pi / 2.0);
        duration = *op.angle * pow(p.omega, Expr(-1.0));
        name = "AnalogRY";
        break;
    case AnalogKind::RZ:
        p.omega = Expr(0.0);
        p.delta = Expr(-1.0);
        duration = *op.angle;
        name = "AnalogRZ";
        break;
    case AnalogKind::Interaction:
        p.omega = Expr(0.0);
        p.delta = Expr(0.0);
        duration = *op.duration;
        name = "AnalogInteraction";
        break;
    case AnalogKind::Rot:
        p.omega = *op.omega;
        p.delta = *op.delta;
        p.phi = *op.phase;
        duration = *op.duration;
        name = "AnalogRot";
        break;
    }
    p.duration = duration;
    return tag(hamevo(rydberg_hamiltonian(reg, p), duration), name);
}

// ---------------------------------------------------------------------------
// sDAQC transform

namespace {

struct IsingData {
    double c0 = 0.0;           // identity coefficient
    std::vector<double> z;     // per-qubit Z coefficient
    Eigen::MatrixXd zz;        // pair coefficients, upper triangle
};

IsingData parse_ising(const Block &gen, int n) {
    IsingData d;
    d.z.assign(n, 0.0);
    d.zz = Eigen::MatrixXd::Zero(n, n);
    for (const auto &term : flatten_pauli_sum(gen, n, {})) {
        if (term.x_mask || term.y_mask)
            throw DomainError("daqc_transform requires ZZ/NN Ising generators");
        std::vector<int> qs;
        for (int q = 0; q < n; ++q)
            if (term.z_mask & (std::uint64_t(1) << (n - 1 - q)))
                qs.push_back(q);
        const double c = term.g.real();
        if (qs.empty())
            d.c0 += c;
        else if (qs.size() == 1)
            d.z[qs[0]] += c;
        else if (qs.size() == 2)
            d.zz(qs[0], qs[1]) += c;
        else
            throw DomainError("daqc_transform supports at most 2-body Ising terms");
    }
    return d;
}

std::vector<std::pair<int, int>> all_pairs(int n) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.emplace_back(i, j);
    return out;
}

int overlap(const std::pair<int, int> &row, const std::vector<int> &pattern) {
    int k = 0;
    for (int q : pattern)
        if (q == row.first || q == row.second)
            ++k;
    return k;
}

} // namespace

DaqcTransform daqc_transform_full(const DaqcTransformRequest &req) {
    if (req.strategy != Strategy::SDAQC)
        throw UnsupportedStrategy("only the stepwise (sDAQC) strategy is supported");
    const int n = req.n_qubits;
    const IsingData target = parse_ising(req.gen_target, n);
    const IsingData build = parse_ising(req.gen_build, n);

    constexpr double kZero = 1e-12;
    const auto pairs = all_pairs(n);
    std::vector<std::pair<int, int>> rows;
    std::vector<double> b;
    for (const auto &p : pairs) {
        const double h = build.zz(p.first, p.second);
        const double g = target.zz(p.first, p.second);
        if (std::abs(h) > kZero) {
            rows.push_back(p);
            b.push_back(req.t_f * g / h);
        } else if (std::abs(g) > kZero) {
            throw SingularTransform("target couples a pair the build Hamiltonian does not");
        }
    }

    // Peel the bare (unconjugated) evolution off first; it carries the
    // symmetric part of the requested couplings and realises target==build
    // as a single evolution of time t_f.
    double t_bare = 0.0;
    for (double v : b)
        t_bare += v;
    if (!rows.empty())
        t_bare /= static_cast<double>(rows.size());

    std::vector<std::pair<std::vector<int>, double>> times;
    if (std::abs(t_bare) > kZero)
        times.push_back({{}, t_bare});

    Eigen::VectorXd resid(static_cast<Eigen::Index>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r)
        resid[static_cast<Eigen::Index>(r)] = b[r] - t_bare;

    if (resid.size() > 0 && resid.lpNorm<Eigen::Infinity>() > kZero) {
        // Sign-pattern columns: pair conjugations first (the canonical
        // system); single-qubit conjugations only when the pair system
        // cannot represent the residual (n == 4, where the pair matrix is
        // rank-deficient because complementary pairs alias).
        std::vector<std::vector<int>> patterns;
        for (const auto &[a, c] : pairs)
            patterns.push_back({a, c});
        auto solve_for = [&](const std::vector<std::vector<int>> &pats,
                             Eigen::VectorXd &t_out) -> double {
            Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(pats.size()));
            for (size_t r = 0; r < rows.size(); ++r)
                for (size_t c = 0; c < pats.size(); ++c)
                    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        (overlap(rows[r], pats[c]) % 2 == 0) ? 1.0 : -1.0;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-12);
            t_out = svd.solve(resid);
            return (m * t_out - resid).lpNorm<Eigen::Infinity>();
        };
        Eigen::VectorXd t;
        const double tol = 1e-9 * std::max(1.0, resid.lpNorm<Eigen::Infinity>());
        double err = solve_for(patterns, t);
        if (err > tol) {
            for (int q = 0; q < n; ++q)
                patterns.push_back({q});
            err = solve_for(patterns, t);
            if (err > tol)
                throw SingularTransform("sign-pattern system cannot realise the target couplings");
        }
        for (size_t c = 0; c < patterns.size(); ++c)
            if (std::abs(t[static_cast<Eigen::Index>(c)]) > kZero)
                times.push_back({patterns[c], t[static_cast<Eigen::Index>(c)]});
    }

    // Accumulate the single-qubit Z and identity parts the evolutions drag
    // along (X conjugation flips the sign of Z_q for q in the pattern), then
    // correct toward the target with local RZ rotations and a global phase.
    std::vector<double> z_acc(n, 0.0);
    double c_acc = 0.0;
    for (const auto &[pattern, t] : times) {
        c_acc += t * build.c0;
        for (int q = 0; q < n; ++q) {
            bool flipped = std::find(pattern.begin(), pattern.end(), q) != pattern.end();
            z_acc[q] += (flipped ? -t : t) * build.z[q];
        }
    }

    DaqcTransform out;
    out.times = times;
    out.z_corrections.assign(n, 0.0);
    std::vector<Block> ops;
    for (const auto &[pattern, t] : times) {
        if (pattern.empty()) {
            ops.push_back(hamevo(req.gen_build, Expr(t)));
            continue;
        }
        std::vector<Block> xs;
        for (int q : pattern)
            xs.push_back(X(q));
        ops.push_back(kron(xs));
        ops.push_back(hamevo(req.gen_build, Expr(t)));
        ops.push_back(kron(std::move(xs)));
    }
    for (int q = 0; q < n; ++q) {
        const double delta = req.t_f * target.z[q] - z_acc[q];
        out.z_corrections[q] = 2.0 * delta; // exp(-i d Z) == RZ(2d)
        if (std::abs(delta) > kZero)
            ops.push_back(RZ(q, Expr(2.0 * delta)));
    }
    out.global_phase = req.t_f * target.c0 - c_acc;
    if (std::abs(out.global_phase) > kZero)
        ops.push_back(tag(hamevo(scale(Expr(out.global_phase), I(0)), Expr(1.0)), "global-phase"));

    if (ops.empty())
        ops.push_back(I(0)); // identity target: an empty chain is not expressible
    out.block = tag(chain(std::move(ops)), "sDAQC");
    return out;
}

Block daqc_transform(const DaqcTransformRequest &req) { return daqc_transform_full(req).block; }

Block da_qft(int n_qubits, Strategy strategy, std::optional<Block> gen_build) {
    if (n_qubits < 1)
        throw EmptyComposition("da_qft needs at least one qubit");
    std::vector<int> support(n_qubits);
    for (int q = 0; q < n_qubits; ++q)
        support[q] = q;
    if (strategy == Strategy::Digital)
        return qft(support);
    if (strategy != Strategy::SDAQC)
        throw UnsupportedStrategy("da_qft supports the Digital and SDAQC strategies");
    if (n_qubits == 1)
        return tag(chain(H(0)), "QFT-sDAQC");
    if (!gen_build)
        throw SingularTransform("SDAQC qft requires a build Hamiltonian");
    std::vector<Block> ops;
    for (int l = 0; l < n_qubits; ++l) {
        ops.push_back(H(l));
        if (l + 1 >= n_qubits)
            continue;
        // One CPHASE layer: prod_j CPHASE(j, l, pi/2^(j-l)) = exp(-i H_T)
        // with H_T = -sum_j pi/2^(j-l) N_j N_l.
        std::vector<Block> terms;
        for (int j = l + 1; j < n_qubits; ++j)
            terms.push_back(
                scale(Expr(-std::numbers::pi / std::exp2(j - l)), kron(N(j), N(l))));
        DaqcTransformRequest req{n_qubits, add(std::move(terms)), 1.0, *gen_build,
                                 Strategy::SDAQC};
        ops.push_back(daqc_transform(req));
    }
    return tag(chain(std::move(ops)), "QFT-sDAQC");
}

} // namespace daqsim
