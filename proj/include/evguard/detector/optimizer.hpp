#pragma once

#include <cmath>
#include <vector>

#include "evguard/detector/common.hpp"

namespace evguard::detector {

/// Per-tensor moment buffers for momentum and Adam.
struct OptimizerState {
    std::vector<Matrix> first;
    std::vector<Matrix> second;
    long step = 0;
};

/// w <- w - eta * grad (or the momentum / Adam variant), then max-norm projection.
template <class Net>
void sgd_step(Net& net, const Net& grad, const TrainConfig& cfg, OptimizerState& state) {
    auto params = tensors(net);
    const auto grads = tensors(grad);
    require(params.size() == grads.size(), "gradient structure does not match model");
    const double eta = cfg.effective_learning_rate();
    if (state.first.size() != params.size()) {
        state.first.clear();
        state.second.clear();
        for (const auto& p : params) {
            state.first.push_back(Matrix::Zero(p.value->rows(), p.value->cols()));
            if (cfg.optimizer == Optimizer::Adam) state.second.push_back(Matrix::Zero(p.value->rows(), p.value->cols()));
        }
        state.step = 0;
    }
    ++state.step;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& w = *params[i].value;
        const Matrix& g = *grads[i].value;
        require(w.rows() == g.rows() && w.cols() == g.cols(), "gradient shape mismatch for " + params[i].name);
        switch (cfg.optimizer) {
        case Optimizer::Sgd:
            w.noalias() -= eta * g;
            break;
        case Optimizer::Momentum:
            state.first[i] = cfg.momentum * state.first[i] - eta * g;
            w += state.first[i];
            break;
        case Optimizer::Adam: {
            const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
            state.first[i] = b1 * state.first[i] + (1.0 - b1) * g;
            state.second[i] = b2 * state.second[i] + (1.0 - b2) * g.cwiseAbs2();
            const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
            const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
            w.array() -= eta * (state.first[i].array() / c1) /
                         ((state.second[i].array() / c2).sqrt() + cfg.adam_epsilon);
            break;
        }
        }
    }
    apply_max_norm(net, cfg.max_norm);
}

template <class Net>
void sgd_step(Net& net, const Net& grad, const TrainConfig& cfg) {
    OptimizerState state;
    sgd_step(net, grad, cfg, state);
}

}  // namespace evguard::detector
