// SPDX-License-Identifier: Apache-2.0
#include "daqsim/model.hpp"

#include <cmath>
#include <numbers>

namespace daqsim {

QuantumModel::QuantumModel(QuantumCircuit circuit, std::vector<Block> observables,
                           DiffMode diff_mode, std::uint64_t seed)
    : circuit_(std::move(circuit)), observables_(std::move(observables)), diff_mode_(diff_mode),
      seed_(seed) {
    std::map<std::string, Parameter> params;
    auto merge = [&params](const std::vector<Parameter> &ps) {
        for (const auto &p : ps) {
            auto [it, inserted] = params.emplace(p.name, p);
            if (!inserted && it->second.kind != p.kind)
                throw Error("parameter '" + p.name + "' used with two different kinds");
        }
    };
    merge(circuit_.block().parameters());
    for (const auto &obs : observables_)
        merge(obs.parameters());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    for (const auto &[name, p] : params)
        if (p.kind == ParamKind::Variational)
            var_params_[name] = unif(rng);
}

std::vector<std::string> QuantumModel::var_names() const {
    std::vector<std::string> names;
    names.reserve(var_params_.size());
    for (const auto &[name, v] : var_params_)
        names.push_back(name);
    return names;
}

ParamMap QuantumModel::merged(const ParamMap &features) const {
    ParamMap out = var_params_;
    for (const auto &[name, v] : features)
        out[name] = v;
    return out;
}

std::vector<std::vector<double>> QuantumModel::expectation(
    const std::vector<ParamMap> &feature_batch, std::optional<StateVector> state) const {
    std::vector<ParamMap> merged_batch;
    merged_batch.reserve(feature_batch.size());
    for (const auto &f : feature_batch)
        merged_batch.push_back(merged(f));
    return expectation_batch(circuit_, observables_, merged_batch, std::move(state));
}

double QuantumModel::expectation_single(const ParamMap &features,
                                        std::optional<StateVector> state) const {
    return expectation({features}, std::move(state))[0][0];
}

StateVector QuantumModel::run_state(const ParamMap &features,
                                    std::optional<StateVector> state) const {
    return run(circuit_, merged(features), std::move(state));
}

SampleCounts QuantumModel::sample_counts(const ParamMap &features, long long n_shots,
                                         std::uint64_t seed) const {
    return sample(circuit_, merged(features), n_shots, seed);
}

std::map<std::string, double> QuantumModel::expectation_gradient(
    const ParamMap &features, const std::vector<std::string> &wrt) const {
    GradientRequest req{circuit_, observables_.at(0), {merged(features)}, wrt, diff_mode_};
    return gradient(req).rows[0];
}

TrainResult train_adam(QuantumModel &model, const GradLossFn &loss_fn, const TrainConfig &cfg) {
    if (cfg.max_iter < 0 || !(cfg.learning_rate > 0.0))
        throw Error("train config needs max_iter >= 0 and learning_rate > 0");
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::mt19937_64 rng(cfg.seed);
    std::map<std::string, double> m1, m2;
    TrainResult result;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        LossValue lv = loss_fn(model, rng);
        if (!std::isfinite(lv.loss))
            throw NaNLoss(result.trace);
        result.trace.push_back(lv.loss);
        for (auto &[name, theta] : model.var_params()) {
            const double g = lv.grad.count(name) ? lv.grad.at(name) : 0.0;
            double &v1 = m1[name];
            double &v2 = m2[name];
            v1 = beta1 * v1 + (1.0 - beta1) * g;
            v2 = beta2 * v2 + (1.0 - beta2) * g * g;
            const double mhat = v1 / (1.0 - std::pow(beta1, it));
            const double vhat = v2 / (1.0 - std::pow(beta2, it));
            theta -= cfg.learning_rate * mhat / (std::sqrt(vhat) + eps);
        }
    }
    return result;
}

TrainResult train_gradient_free(QuantumModel &model, const PlainLossFn &loss_fn,
                                const TrainConfig &cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TrainResult result;
    ParamMap best = model.var_params();
    double best_loss = loss_fn(model, rng);
    double step = 0.5;
    for (int it = 0; it < cfg.max_iter; ++it) {
        ParamMap candidate = best;
        for (auto &[name, v] : candidate)
            v += step * gauss(rng);
        model.var_params() = candidate;
        const double loss = loss_fn(model, rng);
        if (loss <= best_loss) {
            best_loss = loss;
            best = candidate;
            step *= std::exp(0.8); // 1/5-rule style adaptation
        } else {
            step *= std::exp(-0.2);
        }
        result.trace.push_back(best_loss);
    }
    model.var_params() = best;
    return result;
}

} // namespace daqsim
