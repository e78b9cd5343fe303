#pragma once

#include <span>
#include <string>
#include <vector>

#include "evguard/detector/common.hpp"

namespace evguard::detector {

struct DenseLayer {
    Matrix w;  // fan_out x fan_in
    Matrix b;  // fan_out x 1
};

/// Feed-forward classifier: hidden dense layers followed by a 2-unit softmax layer.
struct Mlp {
    std::vector<DenseLayer> layers;  // last entry is the output layer
    Activation hidden_activation = Activation::Relu;

    Eigen::Index input_width() const { return layers.empty() ? 0 : layers.front().w.cols(); }
    std::vector<int> hidden_widths() const {
        std::vector<int> out;
        for (std::size_t l = 0; l + 1 < layers.size(); ++l) out.push_back(static_cast<int>(layers[l].w.rows()));
        return out;
    }
};

inline Mlp make_mlp(int input_width, const std::vector<int>& hidden, Activation act, Init init, std::uint64_t seed) {
    require(input_width >= 1, "MLP input width must be >= 1");
    Rng rng(seed);
    Mlp m;
    m.hidden_activation = act;
    int fan_in = input_width;
    auto add = [&](int fan_out) {
        require(fan_out >= 1, "layer width must be >= 1");
        m.layers.push_back({init_weights(fan_out, fan_in, init, rng), Matrix::Zero(fan_out, 1)});
        fan_in = fan_out;
    };
    for (int n : hidden) add(n);
    add(2);
    return m;
}

inline Mlp zeros_like(const Mlp& m) {
    Mlp z = m;
    for (auto& l : z.layers) {
        l.w.setZero();
        l.b.setZero();
    }
    return z;
}

inline std::vector<TensorRef> tensors(Mlp& m) {
    std::vector<TensorRef> out;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        out.push_back({"layer" + std::to_string(l) + ".w", &m.layers[l].w});
        out.push_back({"layer" + std::to_string(l) + ".b", &m.layers[l].b});
    }
    return out;
}
inline std::vector<ConstTensorRef> tensors(const Mlp& m) {
    std::vector<ConstTensorRef> out;
    for (auto& t : tensors(const_cast<Mlp&>(m))) out.push_back({t.name, t.value});
    return out;
}

/// Dropout is active only when `train` is set and `dropout > 0`.
struct ForwardMode {
    bool train = false;
    double dropout = 0.0;
    std::uint64_t mask_seed = 0;

    bool dropping() const { return train && dropout > 0.0; }
};

struct MlpCache {
    std::vector<Matrix> inputs;  // inputs[l] feeds layer l (inputs[0] = X)
    std::vector<Matrix> pre;     // pre-activation of each layer
    std::vector<Matrix> masks;   // dropout masks of hidden layers (empty when inactive)
};

/// Logits (2 x batch) for column-major samples X (features x batch).
inline Matrix mlp_logits(const Mlp& m, const Matrix& x, const ForwardMode& mode = {}, MlpCache* cache = nullptr) {
    require(!m.layers.empty(), "MLP has no layers");
    if (x.rows() != m.input_width())
        throw ValidationError("MLP expects " + std::to_string(m.input_width()) + " features, got " +
                              std::to_string(x.rows()));
    Rng rng(mode.mask_seed);
    if (cache) *cache = {};
    Matrix a = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        Matrix z = m.layers[l].w * a;
        z.colwise() += m.layers[l].b.col(0);
        if (cache) {
            cache->inputs.push_back(a);
            cache->pre.push_back(z);
        }
        if (l + 1 == m.layers.size()) return z;
        a = activate(z, m.hidden_activation);
        if (mode.dropping()) {
            Matrix mask = dropout_mask(a.rows(), a.cols(), mode.dropout, rng);
            a.array() *= mask.array();
            if (cache) cache->masks.push_back(std::move(mask));
        }
    }
    return {};
}

/// Gradients of every parameter given dL/dlogits.
inline Mlp mlp_backward(const Mlp& m, const MlpCache& cache, const Matrix& dlogits) {
    Mlp g = zeros_like(m);
    Matrix delta = dlogits;
    for (std::size_t l = m.layers.size(); l-- > 0;) {
        g.layers[l].w.noalias() = delta * cache.inputs[l].transpose();
        g.layers[l].b = delta.rowwise().sum();
        if (l == 0) break;
        Matrix da = m.layers[l].w.transpose() * delta;
        if (!cache.masks.empty()) da.array() *= cache.masks[l - 1].array();
        delta = (da.array() * activation_grad(cache.pre[l - 1], m.hidden_activation).array()).matrix();
    }
    return g;
}

inline Prediction mlp_forward(const Mlp& m, std::span<const double> x, const ForwardMode& mode = {}) {
    const Matrix col = Eigen::Map<const Matrix>(x.data(), static_cast<Eigen::Index>(x.size()), 1);
    const Matrix p = softmax(mlp_logits(m, col, mode));
    Prediction out;
    out.probs = {p(0, 0), p(1, 0)};
    out.label = decide(p(0, 0), p(1, 0));
    return out;
}

/// Scales each neuron's incoming weight vector (row of W) down to norm <= limit.
inline void apply_max_norm(Mlp& m, double limit) {
    for (auto& l : m.layers) clamp_row_norms(l.w, 0, l.w.rows(), nullptr, 0, limit);
}

inline double max_incoming_norm(const Mlp& m) {
    double mx = 0.0;
    for (const auto& l : m.layers)
        for (Eigen::Index r = 0; r < l.w.rows(); ++r) mx = std::max(mx, l.w.row(r).norm());
    return mx;
}

}  // namespace evguard::detector
