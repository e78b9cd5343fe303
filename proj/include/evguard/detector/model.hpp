#pragma once

#include <span>
#include <variant>
#include <vector>

#include "evguard/detector/common.hpp"
#include "evguard/detector/gru.hpp"
#include "evguard/detector/mlp.hpp"

namespace evguard::detector {

using Model = std::variant<Mlp, Gru>;

/// Explicit network shape: `layers` hidden layers of `neurons` units each.
struct Architecture {
    ModelKind kind = ModelKind::Gru;
    int layers = 2;
    int neurons = 128;
    Activation hidden_activation = Activation::Softsign;

    void validate() const {
        require(layers >= 1, "layers must be >= 1");
        require(neurons >= 1, "neurons must be >= 1");
    }
};

/// `input_width` is the feature count for an MLP and the sequence length for a GRU.
inline Model make_model(const Architecture& arch, Init init, std::uint64_t seed,
                        int input_width = static_cast<int>(kSlotsPerDay)) {
    arch.validate();
    const std::vector<int> widths(static_cast<std::size_t>(arch.layers), arch.neurons);
    if (arch.kind == ModelKind::Mlp) return make_mlp(input_width, widths, arch.hidden_activation, init, seed);
    return make_gru(widths, arch.hidden_activation, init, seed, input_width);
}

inline ModelKind kind_of(const Model& m) { return std::holds_alternative<Mlp>(m) ? ModelKind::Mlp : ModelKind::Gru; }

template <class Net>
struct CacheOf;
template <>
struct CacheOf<Mlp> {
    using type = MlpCache;
};
template <>
struct CacheOf<Gru> {
    using type = GruCache;
};

inline Matrix logits(const Mlp& m, const Matrix& x, const ForwardMode& mode = {}, MlpCache* c = nullptr) {
    return mlp_logits(m, x, mode, c);
}
inline Matrix logits(const Gru& g, const Matrix& x, const ForwardMode& mode = {}, GruCache* c = nullptr) {
    return gru_logits(g, x, mode, c);
}
inline Mlp backward(const Mlp& m, const MlpCache& c, const Matrix& d) { return mlp_backward(m, c, d); }
inline Gru backward(const Gru& g, const GruCache& c, const Matrix& d) { return gru_backward(g, c, d); }

template <class Net>
struct LossGradient {
    double loss = 0.0;
    Net gradient;
};

namespace detail {

/// Mean loss over the batch and its gradient w.r.t. the logits.
inline double loss_from_logits(const Matrix& z, std::span<const Label> y, Loss loss, Matrix* dz) {
    if (!z.allFinite()) throw NumericError("non-finite value in forward pass");
    const auto B = static_cast<double>(z.cols());
    const Matrix target = one_hot(y);
    const Matrix p = softmax(z);
    double total = 0.0;
    if (loss == Loss::CrossEntropy) {
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            const double mx = z.col(c).maxCoeff();
            const double lse = mx + std::log((z.col(c).array() - mx).exp().sum());
            const int k = y[static_cast<std::size_t>(c)] == Label::Lying ? kLyingIndex : kHonestIndex;
            total += lse - z(k, c);
        }
        if (dz) *dz = (p - target) / B;
    } else {
        const Matrix diff = p - target;
        total = 0.5 * diff.squaredNorm();
        if (dz) {
            // Softmax Jacobian-vector product per column.
            const Matrix dp = diff / B;
            dz->resize(z.rows(), z.cols());
            for (Eigen::Index c = 0; c < z.cols(); ++c) {
                const double dot = p.col(c).dot(dp.col(c));
                dz->col(c) = (p.col(c).array() * (dp.col(c).array() - dot)).matrix();
            }
        }
    }
    const double mean = total / B;
    if (!std::isfinite(mean)) throw NumericError("non-finite loss");
    return mean;
}

}  // namespace detail

/// Mean loss and exact gradients of every parameter for a batch
/// (one sample per column of `x`).
template <class Net>
LossGradient<Net> loss_and_gradients(const Net& net, const Matrix& x, std::span<const Label> y, Loss loss,
                                     const ForwardMode& mode = {}) {
    require(x.cols() > 0, "batch must not be empty");
    require(static_cast<std::size_t>(x.cols()) == y.size(), "batch labels/columns mismatch");
    typename CacheOf<Net>::type cache;
    const Matrix z = logits(net, x, mode, &cache);
    Matrix dz;
    LossGradient<Net> out;
    out.loss = detail::loss_from_logits(z, y, loss, &dz);
    out.gradient = backward(net, cache, dz);
    return out;
}

template <class Net>
double batch_loss(const Net& net, const Matrix& x, std::span<const Label> y, Loss loss) {
    require(x.cols() > 0, "batch must not be empty");
    require(static_cast<std::size_t>(x.cols()) == y.size(), "batch labels/columns mismatch");
    return detail::loss_from_logits(logits(net, x), y, loss, nullptr);
}

/// Class probabilities (2 x n), evaluated in inference mode in fixed-size chunks.
template <class Net>
Matrix class_probabilities(const Net& net, const Matrix& x, Eigen::Index chunk = 512) {
    Matrix out(2, x.cols());
    for (Eigen::Index c0 = 0; c0 < x.cols(); c0 += chunk) {
        const Eigen::Index n = std::min(chunk, x.cols() - c0);
        out.middleCols(c0, n) = softmax(logits(net, Matrix(x.middleCols(c0, n))));
    }
    return out;
}

inline Matrix class_probabilities(const Model& m, const Matrix& x) {
    return std::visit([&](const auto& net) { return class_probabilities(net, x); }, m);
}

inline Prediction predict(const Model& m, std::span<const double> row) {
    return std::visit(
        [&](const auto& net) {
            if constexpr (std::is_same_v<std::decay_t<decltype(net)>, Mlp>) return mlp_forward(net, row);
            else return gru_forward(net, row);
        },
        m);
}

/// Labels for every column of `probs` using the honest-on-tie rule.
inline std::vector<Label> decide_all(const Matrix& probs) {
    std::vector<Label> out(static_cast<std::size_t>(probs.cols()));
    for (Eigen::Index c = 0; c < probs.cols(); ++c)
        out[static_cast<std::size_t>(c)] = decide(probs(kLyingIndex, c), probs(kHonestIndex, c));
    return out;
}

}  // namespace evguard::detector
