// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * The two variational workloads: differentiable-circuit training for an ODE
 * and the 2D Laplace equation, and analog QAOA for QUBO problems (register
 * embedding, sampling loss, gradient-free training).
 */
#pragma once

#include "daqsim/daqc.hpp"
#include "daqsim/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace daqsim {

// --- DQC: df/dx = 4x^3 + x^2 - 2x - 1/2 with f(0) = 1 ----------------------

double dqc_ode_rhs(double x);
/// Closed form: x^4 + x^3/3 - x^2 - x/2 + 1.
double dqc_ode_exact(double x);

/// 4 qubits, Chebyshev feature map on "x", depth-3 HEA, Ising observable.
QuantumModel make_dqc_ode_model(std::uint64_t seed, int n_qubits = 4, int depth = 3);

/// mean[(df/dx - rhs)^2] over the points plus (f(0) - 1)^2; df/dx through
/// the shift-rule expansion, parameter gradients via the model's diff mode.
LossValue dqc_ode_loss(const QuantumModel &model, const std::vector<double> &points,
                       bool with_grad = true);

/// Epoch loss resampling `n_points` collocation points from uniform
/// (-0.99, 0.99) on every call.
GradLossFn dqc_ode_epoch_loss(int n_points);

// --- DQC: Laplace u_xx + u_yy = 0 on [0,1]^2 --------------------------------

/// u(0,y) = sin(pi y), other boundaries 0; compared against e^{-pi x} sin(pi y).
double dqc_laplace_exact(double x, double y);

/// 4 qubits, parallel Fourier maps ("x" on qubits 0,1 and "y" on 2,3),
/// depth-3 HEA, Ising observable.
QuantumModel make_dqc_laplace_model(std::uint64_t seed, int n_qubits = 4, int depth = 3);

/// Five mean-squared terms: u(0,y)-sin(pi y), u(1,y), u(x,1), u(x,0) and the
/// interior residual u_xx + u_yy (second derivatives through nested shifts).
LossValue dqc_laplace_loss(const QuantumModel &model, std::mt19937_64 &rng, int n_colpoints,
                           bool with_grad = true);

GradLossFn dqc_laplace_epoch_loss(int n_colpoints);

// --- QUBO via analog QAOA ----------------------------------------------------

struct QuboProblem {
    Eigen::MatrixXd q; // symmetric
    long long n_shots = 1000;
    int n_layers = 2;
};

/// z^T Q z for the 0/1 vector read off the bitstring (qubit 0 leftmost).
double qubo_cost(const Eigen::MatrixXd &q, const std::string &bits);
/// Brute-force minimum over all bitstrings; returns (cost, minimizers).
std::pair<double, std::vector<std::string>> qubo_brute_force(const Eigen::MatrixXd &q);

struct QuboEmbedding {
    Register reg;
    double residual = 0.0;
    bool converged = false;
};

/// Place atoms so that the C6/r^6 pair couplings approximate the off-diagonal
/// of Q (Nelder-Mead over the 2n coordinates, seeded). Returns a best-effort
/// embedding with its Frobenius residual.
QuboEmbedding embed_qubo(const Eigen::MatrixXd &q, double c6 = kC6Level70,
                         std::uint64_t seed = 0);

/// Analog ansatz: n_layers repetitions of AnalogRX("t_i") then AnalogRZ("s_i")
/// lowered onto the register's Rydberg Hamiltonian.
QuantumModel make_qubo_model(const QuboProblem &problem, const Register &reg,
                             std::uint64_t seed);

/// Sampled cost sum_b count(b) cost(b) / n_shots.
double qubo_loss(const QuantumModel &model, const QuboProblem &problem,
                 std::uint64_t sample_seed);
/// Infinite-shot limit: sum_b |psi_b|^2 cost(b) from the final state.
double qubo_exact_cost(const QuantumModel &model, const Eigen::MatrixXd &q);
PlainLossFn qubo_sample_loss(const QuboProblem &problem, std::uint64_t sample_seed);

/// The bundled 5x5 demo QUBO instance (two degenerate optima).
Eigen::MatrixXd demo_qubo_matrix();

} // namespace daqsim
