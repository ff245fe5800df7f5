// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Digital-analog layer: lowering of global analog rotations onto the Rydberg
 * Hamiltonian, the stepwise DAQC Ising transform and the digital-analog QFT.
 */
#pragma once

#include "daqsim/block.hpp"
#include "daqsim/hamiltonian.hpp"
#include "daqsim/register.hpp"

#include <optional>
#include <vector>

namespace daqsim {

enum class Strategy { Digital, SDAQC, BDAQC };

enum class AnalogKind { RX, RY, RZ, Rot, Interaction };

struct AnalogOp {
    AnalogKind kind;
    std::optional<Expr> angle;    // RX/RY/RZ
    std::optional<Expr> omega;    // Rot
    std::optional<Expr> delta;    // Rot
    std::optional<Expr> phase;    // Rot
    std::optional<Expr> duration; // Rot/Interaction
};

AnalogOp AnalogRX(const Expr &angle);
AnalogOp AnalogRY(const Expr &angle);
AnalogOp AnalogRZ(const Expr &angle);
AnalogOp AnalogRot(const Expr &omega, const Expr &delta, const Expr &phase, const Expr &duration);
AnalogOp AnalogInteraction(const Expr &duration);

/// Lower a global analog operation to HamEvo of the Rydberg Hamiltonian on
/// the register. The C6/r^6 interaction is always on (banged semantics):
///   RX(a): phi=0,     delta=0, omega from base, duration = a/omega
///   RY(a): phi=-pi/2, delta=0, duration = a/omega (drive +omega/2 sum Y,
///          so RY(a) matches kron RY(a) in the decoupled limit)
///   RZ(a): omega=0, delta=-1 rad/us, duration = a  (delta*t = -a)
///   Interaction(t): omega=delta=0
///   Rot: all four parameters pass through.
/// Only the banged strategy is supported here.
Block lower_analog(const AnalogOp &op, const Register &reg, const RydbergParams &base,
                   Strategy strategy = Strategy::BDAQC);

struct DaqcTransformRequest {
    int n_qubits;
    Block gen_target;
    double t_f;
    Block gen_build;
    Strategy strategy = Strategy::SDAQC;
};

struct DaqcTransform {
    Block block = I(0);
    /// Conjugation pattern (empty = bare, one index = single-X, two = pair)
    /// with the solved evolution time; zero-time patterns are omitted.
    std::vector<std::pair<std::vector<int>, double>> times;
    /// Per-qubit Z-rotation correction angles (radians of RZ).
    std::vector<double> z_corrections;
    /// Global phase accumulator: the output includes exp(-i*global_phase).
    double global_phase = 0.0;
};

/// Map the evolution exp(-i t_f gen_target) of a ZZ/NN Ising target onto
/// evolutions of gen_build conjugated by X gates, solving the sign-pattern
/// linear system. NN terms are reduced to Z/ZZ form internally; the required
/// single-qubit Z rotations and global phase are appended to the output.
DaqcTransform daqc_transform_full(const DaqcTransformRequest &req);
Block daqc_transform(const DaqcTransformRequest &req);

/// QFT constructor with strategy selection: Digital delegates to qft();
/// SDAQC replaces each CPHASE layer by the transform of its NN generator,
/// keeping the Hadamards digital.
Block da_qft(int n_qubits, Strategy strategy = Strategy::Digital,
             std::optional<Block> gen_build = std::nullopt);

} // namespace daqsim
