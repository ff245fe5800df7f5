// SPDX-License-Identifier: Apache-2.0
#include "daqsim/apps.hpp"

#include "daqsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace daqsim {

// ---------------------------------------------------------------------------
// DQC / ODE

double dqc_ode_rhs(double x) { return 4.0 * x * x * x + x * x - 2.0 * x - 0.5; }

double dqc_ode_exact(double x) {
    return x * x * x * x + x * x * x / 3.0 - x * x - 0.5 * x + 1.0;
}

QuantumModel make_dqc_ode_model(std::uint64_t seed, int n_qubits, int depth) {
    Block fm = feature_map(n_qubits, "x", FeatureMapType::Chebyshev);
    Block circ = chain(fm, hea(n_qubits, depth));
    return QuantumModel(QuantumCircuit(n_qubits, circ), {ising_hamiltonian(n_qubits)},
                        DiffMode::Adjoint, seed);
}

LossValue dqc_ode_loss(const QuantumModel &model, const std::vector<double> &points,
                       bool with_grad) {
    const auto thetas = model.var_names();
    LossValue out;
    for (const auto &name : thetas)
        out.grad[name] = 0.0;
    const double p = static_cast<double>(points.size());
    for (double x : points) {
        auto fn = std::make_shared<CircuitFunction>(model.circuit(), model.observables()[0],
                                                    model.merged({{"x", x}}));
        ShiftedSum f(fn);
        ShiftedSum df = f.derivative("x");
        const double resid = df.value() - dqc_ode_rhs(x);
        out.loss += resid * resid / p;
        if (with_grad) {
            auto g = df.gradient(thetas, model.diff_mode());
            for (const auto &name : thetas)
                out.grad[name] += 2.0 * resid * g[name] / p;
        }
    }
    auto fn0 = std::make_shared<CircuitFunction>(model.circuit(), model.observables()[0],
                                                 model.merged({{"x", 0.0}}));
    ShiftedSum f0(fn0);
    const double boundary = f0.value() - 1.0;
    out.loss += boundary * boundary;
    if (with_grad) {
        auto g0 = f0.gradient(thetas, model.diff_mode());
        for (const auto &name : thetas)
            out.grad[name] += 2.0 * boundary * g0[name];
    }
    return out;
}

GradLossFn dqc_ode_epoch_loss(int n_points) {
    return [n_points](const QuantumModel &m, std::mt19937_64 &rng) {
        std::uniform_real_distribution<double> unif(-0.99, 0.99);
        std::vector<double> points(n_points);
        for (auto &x : points)
            x = unif(rng);
        return dqc_ode_loss(m, points, true);
    };
}

// ---------------------------------------------------------------------------
// DQC / Laplace

double dqc_laplace_exact(double x, double y) {
    return std::exp(-std::numbers::pi * x) * std::sin(std::numbers::pi * y);
}

QuantumModel make_dqc_laplace_model(std::uint64_t seed, int n_qubits, int depth) {
    const int split = n_qubits / 2;
    std::vector<int> sx(split), sy(n_qubits - split);
    for (int i = 0; i < split; ++i)
        sx[i] = i;
    for (int i = split; i < n_qubits; ++i)
        sy[i - split] = i;
    Block fm = kron(feature_map(split, "x", FeatureMapType::Fourier, sx),
                    feature_map(n_qubits - split, "y", FeatureMapType::Fourier, sy));
    Block circ = chain(fm, hea(n_qubits, depth));
    return QuantumModel(QuantumCircuit(n_qubits, circ), {ising_hamiltonian(n_qubits)},
                        DiffMode::Adjoint, seed);
}

namespace {

void accumulate_boundary(const QuantumModel &model, double x, double y, double target,
                         double weight, const std::vector<std::string> &thetas, bool with_grad,
                         LossValue &out) {
    auto fn = std::make_shared<CircuitFunction>(model.circuit(), model.observables()[0],
                                                model.merged({{"x", x}, {"y", y}}));
    ShiftedSum f(fn);
    const double resid = f.value() - target;
    out.loss += weight * resid * resid;
    if (with_grad) {
        auto g = f.gradient(thetas, model.diff_mode());
        for (const auto &name : thetas)
            out.grad[name] += weight * 2.0 * resid * g[name];
    }
}

} // namespace

LossValue dqc_laplace_loss(const QuantumModel &model, std::mt19937_64 &rng, int n_colpoints,
                           bool with_grad) {
    const auto thetas = model.var_names();
    LossValue out;
    for (const auto &name : thetas)
        out.grad[name] = 0.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double w = 1.0 / static_cast<double>(n_colpoints);

    for (int s = 0; s < n_colpoints; ++s) { // u(0,y) = sin(pi y)
        const double y = unif(rng);
        accumulate_boundary(model, 0.0, y, std::sin(std::numbers::pi * y), w, thetas, with_grad,
                            out);
    }
    for (int s = 0; s < n_colpoints; ++s) // u(1,y) = 0
        accumulate_boundary(model, 1.0, unif(rng), 0.0, w, thetas, with_grad, out);
    for (int s = 0; s < n_colpoints; ++s) // u(x,1) = 0
        accumulate_boundary(model, unif(rng), 1.0, 0.0, w, thetas, with_grad, out);
    for (int s = 0; s < n_colpoints; ++s) // u(x,0) = 0
        accumulate_boundary(model, unif(rng), 0.0, 0.0, w, thetas, with_grad, out);

    for (int s = 0; s < n_colpoints; ++s) { // u_xx + u_yy = 0
        const double x = unif(rng);
        const double y = unif(rng);
        auto fn = std::make_shared<CircuitFunction>(model.circuit(), model.observables()[0],
                                                    model.merged({{"x", x}, {"y", y}}));
        ShiftedSum f(fn);
        ShiftedSum uxx = f.derivative("x").derivative("x");
        ShiftedSum uyy = f.derivative("y").derivative("y");
        const double resid = uxx.value() + uyy.value();
        out.loss += w * resid * resid;
        if (with_grad) {
            auto gx = uxx.gradient(thetas, model.diff_mode());
            auto gy = uyy.gradient(thetas, model.diff_mode());
            for (const auto &name : thetas)
                out.grad[name] += w * 2.0 * resid * (gx[name] + gy[name]);
        }
    }
    return out;
}

GradLossFn dqc_laplace_epoch_loss(int n_colpoints) {
    return [n_colpoints](const QuantumModel &m, std::mt19937_64 &rng) {
        return dqc_laplace_loss(m, rng, n_colpoints, true);
    };
}

// ---------------------------------------------------------------------------
// QUBO

double qubo_cost(const Eigen::MatrixXd &q, const std::string &bits) {
    const int n = static_cast<int>(bits.size());
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        if (bits[i] != '1')
            continue;
        for (int j = 0; j < n; ++j)
            if (bits[j] == '1')
                cost += q(i, j);
    }
    return cost;
}

std::pair<double, std::vector<std::string>> qubo_brute_force(const Eigen::MatrixXd &q) {
    const int n = static_cast<int>(q.rows());
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::string> minimizers;
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << n); ++idx) {
        std::string bits(n, '0');
        for (int qb = 0; qb < n; ++qb)
            if (idx & (std::uint64_t(1) << (n - 1 - qb)))
                bits[qb] = '1';
        const double c = qubo_cost(q, bits);
        if (c < best - 1e-12) {
            best = c;
            minimizers = {bits};
        } else if (std::abs(c - best) <= 1e-12) {
            minimizers.push_back(bits);
        }
    }
    return {best, minimizers};
}

namespace {

// Nelder-Mead over R^d with standard reflection/expansion/contraction.
struct NelderMead {
    std::function<double(const Eigen::VectorXd &)> f;
    int max_iter = 20000;
    double tol = 1e-10;

    Eigen::VectorXd minimize(const Eigen::VectorXd &x0, double init_step, double &best_out) {
        const int d = static_cast<int>(x0.size());
        std::vector<Eigen::VectorXd> xs(d + 1, x0);
        std::vector<double> fs(d + 1);
        for (int i = 0; i < d; ++i)
            xs[i + 1][i] += init_step;
        for (int i = 0; i <= d; ++i)
            fs[i] = f(xs[i]);
        std::vector<int> order(d + 1);
        for (int it = 0; it < max_iter; ++it) {
            for (int i = 0; i <= d; ++i)
                order[i] = i;
            std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
            if (fs[order[d]] - fs[order[0]] < tol)
                break;
            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
            for (int i = 0; i < d; ++i)
                centroid += xs[order[i]];
            centroid /= d;
            const int worst = order[d];
            Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
            double fr = f(xr);
            if (fr < fs[order[0]]) {
                Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
                double fe = f(xe);
                if (fe < fr) {
                    xs[worst] = xe;
                    fs[worst] = fe;
                } else {
                    xs[worst] = xr;
                    fs[worst] = fr;
                }
            } else if (fr < fs[order[d - 1]]) {
                xs[worst] = xr;
                fs[worst] = fr;
            } else {
                Eigen::VectorXd xc = centroid + 0.5 * (xs[worst] - centroid);
                double fc = f(xc);
                if (fc < fs[worst]) {
                    xs[worst] = xc;
                    fs[worst] = fc;
                } else { // shrink toward the best vertex
                    for (int i = 1; i <= d; ++i) {
                        xs[order[i]] = xs[order[0]] + 0.5 * (xs[order[i]] - xs[order[0]]);
                        fs[order[i]] = f(xs[order[i]]);
                    }
                }
            }
        }
        int best = 0;
        for (int i = 1; i <= d; ++i)
            if (fs[i] < fs[best])
                best = i;
        best_out = fs[best];
        return xs[best];
    }
};

} // namespace

QuboEmbedding embed_qubo(const Eigen::MatrixXd &q, double c6, std::uint64_t seed) {
    const int n = static_cast<int>(q.rows());
    if (q.rows() != q.cols() || (q - q.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw Error("QUBO matrix must be symmetric");
    if (n > 10)
        throw Error("embed_qubo supports up to 10 variables");

    double max_off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            max_off = std::max(max_off, std::abs(q(i, j)));
    if (max_off == 0.0) {
        // Unconstrained couplings: any far-separated layout will do.
        return {Register::line(n, 100.0), 0.0, true};
    }

    // Typical target distance sets the simplex scale.
    double mean_r = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(q(i, j)) > 1e-12) {
                mean_r += std::pow(c6 / std::abs(q(i, j)), 1.0 / 6.0);
                ++count;
            }
    mean_r /= count;

    auto objective = [&](const Eigen::VectorXd &coords) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double dx = coords[2 * i] - coords[2 * j];
                const double dy = coords[2 * i + 1] - coords[2 * j + 1];
                const double r2 = dx * dx + dy * dy;
                const double coupling = r2 > 0.0 ? c6 / (r2 * r2 * r2) : 1e30;
                const double diff = coupling - q(i, j);
                sum += 2.0 * diff * diff; // both (i,j) and (j,i) entries
            }
        return std::sqrt(sum);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd x0(2 * n);
    for (int i = 0; i < 2 * n; ++i)
        x0[i] = unif(rng) * mean_r;

    NelderMead nm{objective};
    double best = 0.0;
    Eigen::VectorXd coords = nm.minimize(x0, 0.5 * mean_r, best);

    std::vector<Register::Coord> cs(n);
    for (int i = 0; i < n; ++i)
        cs[i] = {coords[2 * i], coords[2 * i + 1]};
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    return {Register::from_coordinates(cs), best, best < 1e-3 * scale * n};
}

QuantumModel make_qubo_model(const QuboProblem &problem, const Register &reg,
                             std::uint64_t seed) {
    RydbergParams base;
    base.omega = Expr(2.0 * std::numbers::pi);
    std::vector<Block> ops;
    for (int layer = 0; layer < problem.n_layers; ++layer) {
        ops.push_back(lower_analog(AnalogRX(Expr("t" + std::to_string(layer))), reg, base));
        ops.push_back(lower_analog(AnalogRZ(Expr("s" + std::to_string(layer))), reg, base));
    }
    return QuantumModel(QuantumCircuit(reg, chain(std::move(ops))), {}, DiffMode::GPSR, seed);
}

double qubo_loss(const QuantumModel &model, const QuboProblem &problem,
                 std::uint64_t sample_seed) {
    SampleCounts counts = model.sample_counts({}, problem.n_shots, sample_seed);
    double cost = 0.0;
    for (const auto &[bits, count] : counts)
        cost += static_cast<double>(count) * qubo_cost(problem.q, bits);
    return cost / static_cast<double>(problem.n_shots);
}

double qubo_exact_cost(const QuantumModel &model, const Eigen::MatrixXd &q) {
    StateVector psi = model.run_state();
    const int n = psi.n_qubits();
    double cost = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        if (p == 0.0)
            continue;
        std::string bits(n, '0');
        for (int qb = 0; qb < n; ++qb)
            if (i & (std::size_t(1) << (n - 1 - qb)))
                bits[qb] = '1';
        cost += p * qubo_cost(q, bits);
    }
    return cost;
}

PlainLossFn qubo_sample_loss(const QuboProblem &problem, std::uint64_t sample_seed) {
    return [problem, sample_seed](const QuantumModel &m, std::mt19937_64 &) {
        return qubo_loss(m, problem, sample_seed);
    };
}

Eigen::MatrixXd demo_qubo_matrix() {
    Eigen::MatrixXd q(5, 5);
    q << -10.0, 19.7365809, 19.7365809, 5.42015853, 5.42015853,
        19.7365809, -10.0, 20.67626392, 0.17675796, 0.85604541,
        19.7365809, 20.67626392, -10.0, 0.85604541, 0.17675796,
        5.42015853, 0.17675796, 0.85604541, -10.0, 0.32306662,
        5.42015853, 0.85604541, 0.17675796, 0.32306662, -10.0;
    return q;
}

} // namespace daqsim
