#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evguard/core.hpp"
#include "evguard/rng.hpp"

namespace evguard::detector {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { Sigmoid, Tanh, Relu, Softsign };
enum class Optimizer { Sgd, Momentum, Adam };
enum class Init { Uniform, Normal, Glorot };
enum class Loss { CrossEntropy, MeanSquaredError };
enum class ModelKind { Mlp, Gru };

inline std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Softsign: return "softsign";
    }
    return "?";
}
inline std::string_view to_string(Optimizer o) {
    switch (o) {
    case Optimizer::Sgd: return "sgd";
    case Optimizer::Momentum: return "momentum";
    case Optimizer::Adam: return "adam";
    }
    return "?";
}
inline std::string_view to_string(Init i) {
    switch (i) {
    case Init::Uniform: return "uniform";
    case Init::Normal: return "normal";
    case Init::Glorot: return "glorot";
    }
    return "?";
}
inline std::string_view to_string(Loss l) { return l == Loss::CrossEntropy ? "cross_entropy" : "mean_squared_error"; }
inline std::string_view to_string(ModelKind k) { return k == ModelKind::Mlp ? "mlp" : "gru"; }

template <class E>
E parse_enum(std::string_view s, std::initializer_list<E> all, const char* what) {
    for (E e : all)
        if (to_string(e) == s) return e;
    throw ValidationError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}
inline Activation parse_activation(std::string_view s) {
    return parse_enum(s, {Activation::Sigmoid, Activation::Tanh, Activation::Relu, Activation::Softsign}, "activation");
}
inline Optimizer parse_optimizer(std::string_view s) {
    return parse_enum(s, {Optimizer::Sgd, Optimizer::Momentum, Optimizer::Adam}, "optimizer");
}
inline Init parse_init(std::string_view s) { return parse_enum(s, {Init::Uniform, Init::Normal, Init::Glorot}, "init"); }
inline Loss parse_loss(std::string_view s) { return parse_enum(s, {Loss::CrossEntropy, Loss::MeanSquaredError}, "loss"); }
inline ModelKind parse_model_kind(std::string_view s) { return parse_enum(s, {ModelKind::Mlp, ModelKind::Gru}, "model kind"); }

inline Matrix activate(const Matrix& z, Activation a) {
    switch (a) {
    case Activation::Sigmoid: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case Activation::Tanh: return z.array().tanh().matrix();
    case Activation::Relu: return z.array().max(0.0).matrix();
    case Activation::Softsign: return (z.array() / (1.0 + z.array().abs())).matrix();
    }
    return z;
}

/// d activation / dz evaluated at pre-activation z.
inline Matrix activation_grad(const Matrix& z, Activation a) {
    switch (a) {
    case Activation::Sigmoid: {
        const Eigen::ArrayXXd s = 1.0 / (1.0 + (-z.array()).exp());
        return (s * (1.0 - s)).matrix();
    }
    case Activation::Tanh: return (1.0 - z.array().tanh().square()).matrix();
    case Activation::Relu: return (z.array() > 0.0).cast<double>().matrix();
    case Activation::Softsign: return (1.0 / (1.0 + z.array().abs()).square()).matrix();
    }
    return Matrix::Ones(z.rows(), z.cols());
}

inline Matrix sigmoid(const Matrix& z) { return activate(z, Activation::Sigmoid); }

/// Column-wise softmax.
inline Matrix softmax(const Matrix& logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
        const double mx = logits.col(c).maxCoeff();
        const Eigen::ArrayXd e = (logits.col(c).array() - mx).exp();
        out.col(c) = (e / e.sum()).matrix();
    }
    return out;
}

/// Output index 0 is "lying", index 1 is "honest": honest targets are (0,1).
inline constexpr int kLyingIndex = 0;
inline constexpr int kHonestIndex = 1;

inline Matrix one_hot(std::span<const Label> labels) {
    Matrix y = Matrix::Zero(2, static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i)
        y(labels[i] == Label::Lying ? kLyingIndex : kHonestIndex, static_cast<Eigen::Index>(i)) = 1.0;
    return y;
}

struct Prediction {
    std::array<double, 2> probs{0.5, 0.5};
    Label label = Label::Honest;

    double lying_probability() const { return probs[kLyingIndex]; }
};

/// argmax with ties going to honest.
inline Label decide(double p_lying, double p_honest) { return p_lying > p_honest ? Label::Lying : Label::Honest; }

struct TrainConfig {
    std::optional<double> learning_rate;  // per-optimizer default when empty
    int batch_size = 32;
    int epochs = 20;
    Loss loss = Loss::CrossEntropy;
    double dropout = 0.0;
    double max_norm = 3.0;  // J; per-neuron incoming-weight norm cap
    Init init = Init::Glorot;
    Optimizer optimizer = Optimizer::Adam;
    double momentum = 0.9;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 42;

    double effective_learning_rate() const {
        if (learning_rate) return *learning_rate;
        switch (optimizer) {
        case Optimizer::Sgd: return 0.05;
        case Optimizer::Momentum: return 0.01;
        case Optimizer::Adam: return 0.001;
        }
        return 0.01;
    }

    void validate() const {
        require(effective_learning_rate() >= 0.0, "learning rate must be >= 0");
        require(batch_size >= 1, "batch_size must be >= 1");
        require(epochs >= 1, "epochs must be >= 1");
        require(dropout >= 0.0 && dropout <= 0.9, "dropout must be in [0, 0.9]");
        require(max_norm > 0.0, "max_norm must be > 0");
    }
};

/// Initial weight matrix (rows = fan_out, cols = fan_in).
inline Matrix init_weights(Eigen::Index rows, Eigen::Index cols, Init init, Rng& rng) {
    Matrix w(rows, cols);
    const double glorot = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            switch (init) {
            case Init::Uniform: w(r, c) = rng.uniform(-0.05, 0.05); break;
            case Init::Normal: w(r, c) = rng.normal(0.0, 0.05); break;
            case Init::Glorot: w(r, c) = rng.uniform(-glorot, glorot); break;
            }
        }
    return w;
}

/// Inverted-dropout mask: entries are 0 or 1/(1-rate).
inline Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
    Matrix m(rows, cols);
    const double keep = 1.0 / (1.0 - rate);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.uniform() < rate ? 0.0 : keep;
    return m;
}

/// Named view of one parameter tensor, used by optimizers and checkpoints.
struct TensorRef {
    std::string name;
    Matrix* value;
};
struct ConstTensorRef {
    std::string name;
    const Matrix* value;
};

/// Rescales rows of `w` (restricted to `rows`) together with the matching rows
/// of `w2` (if given) so that each combined row norm is at most `limit`.
inline void clamp_row_norms(Matrix& w, Eigen::Index row_begin, Eigen::Index row_count, Matrix* w2,
                            Eigen::Index row2_begin, double limit) {
    for (Eigen::Index k = 0; k < row_count; ++k) {
        double sq = w.row(row_begin + k).squaredNorm();
        if (w2) sq += w2->row(row2_begin + k).squaredNorm();
        const double norm = std::sqrt(sq);
        if (norm > limit) {
            const double s = limit / norm;
            w.row(row_begin + k) *= s;
            if (w2) w2->row(row2_begin + k) *= s;
        }
    }
}

}  // namespace evguard::detector
