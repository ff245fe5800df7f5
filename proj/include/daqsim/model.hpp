// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * QuantumModel: a circuit + observables + differentiation-mode bundle with
 * stored variational parameters, plus the two training loops (Adam and a
 * seeded (1+1) evolution strategy for sample-based losses).
 */
#pragma once

#include "daqsim/block.hpp"
#include "daqsim/diff.hpp"
#include "daqsim/statevector.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace daqsim {

class QuantumModel {
  public:
    /// Variational parameters are initialised uniformly in [0, 2pi) from the
    /// model seed.
    QuantumModel(QuantumCircuit circuit, std::vector<Block> observables,
                 DiffMode diff_mode = DiffMode::GPSR, std::uint64_t seed = 0);

    const QuantumCircuit &circuit() const { return circuit_; }
    const std::vector<Block> &observables() const { return observables_; }
    DiffMode diff_mode() const { return diff_mode_; }
    std::uint64_t seed() const { return seed_; }

    ParamMap &var_params() { return var_params_; }
    const ParamMap &var_params() const { return var_params_; }
    std::vector<std::string> var_names() const;

    /// Trainable + feature values merged into one map.
    ParamMap merged(const ParamMap &features = {}) const;

    /// Shape (batch, n_observables).
    std::vector<std::vector<double>> expectation(
        const std::vector<ParamMap> &feature_batch,
        std::optional<StateVector> state = std::nullopt) const;
    double expectation_single(const ParamMap &features = {},
                              std::optional<StateVector> state = std::nullopt) const;

    StateVector run_state(const ParamMap &features = {},
                          std::optional<StateVector> state = std::nullopt) const;
    SampleCounts sample_counts(const ParamMap &features, long long n_shots,
                               std::uint64_t seed) const;

    /// d<obs[0]>/d(name) for feature or variational parameters, via the
    /// model's differentiation mode.
    std::map<std::string, double> expectation_gradient(const ParamMap &features,
                                                       const std::vector<std::string> &wrt) const;

  private:
    QuantumCircuit circuit_;
    std::vector<Block> observables_;
    DiffMode diff_mode_;
    std::uint64_t seed_;
    ParamMap var_params_;
};

enum class Optimizer { Adam, GradientFreeSearch };

struct TrainConfig {
    int max_iter = 100;
    double learning_rate = 0.01;
    Optimizer optimizer = Optimizer::Adam;
    std::uint64_t seed = 0;
};

struct LossValue {
    double loss = 0.0;
    std::map<std::string, double> grad;
};

/// Gradient-based loss: may consume the epoch RNG (collocation sampling).
using GradLossFn = std::function<LossValue(const QuantumModel &, std::mt19937_64 &)>;
/// Sample-based loss for gradient-free training.
using PlainLossFn = std::function<double(const QuantumModel &, std::mt19937_64 &)>;

struct TrainResult {
    std::vector<double> trace;
};

/// Adam (beta1=0.9, beta2=0.999, eps=1e-8) over the model's variational
/// parameters. Throws NaNLoss (with the trace) on a non-finite loss.
TrainResult train_adam(QuantumModel &model, const GradLossFn &loss_fn, const TrainConfig &cfg);

/// Seeded (1+1) evolution strategy with a 1/5-rule step adaptation; the
/// trace is the best loss seen so far (monotone non-increasing). Runs
/// exactly max_iter candidate evaluations beyond the incumbent.
TrainResult train_gradient_free(QuantumModel &model, const PlainLossFn &loss_fn,
                                const TrainConfig &cfg);

} // namespace daqsim
