#pragma once

// Stacked GRU over a scalar sequence (one SoC value per step).
//
//   z_t = sigmoid(U_z o_t + W_z s_{t-1} + b_z)
//   r_t = sigmoid(U_r o_t + W_r s_{t-1} + b_r)
//   h_t = tanh(U_h o_t + W_h (s_{t-1} .* r_t) + b_h)
//   s_t = (1 - z_t) .* h_t + z_t .* s_{t-1}
//
// Layer l > 0 receives act(s_t) of layer l-1 (dropout applied between layers).
// The class scores are softmax(V s_T + b_o) on the top layer's final state.
//
// Batched tensors keep one column per sample; time step t of a batch of B
// occupies columns [t*B, (t+1)*B).

#include <span>
#include <string>
#include <vector>

#include "evguard/detector/common.hpp"
#include "evguard/detector/mlp.hpp"

namespace evguard::detector {

struct GruLayer {
    Matrix u_z, w_z, b_z;
    Matrix u_r, w_r, b_r;
    Matrix u_h, w_h, b_h;

    Eigen::Index width() const { return w_z.rows(); }
    Eigen::Index input_width() const { return u_z.cols(); }
};

struct Gru {
    std::vector<GruLayer> layers;
    Matrix v;    // 2 x N
    Matrix b_o;  // 2 x 1
    Activation hidden_activation = Activation::Softsign;
    int sequence_length = static_cast<int>(kSlotsPerDay);

    std::vector<int> widths() const {
        std::vector<int> out;
        for (const auto& l : layers) out.push_back(static_cast<int>(l.width()));
        return out;
    }
};

inline GruLayer make_gru_layer(Eigen::Index in, Eigen::Index n, Init init, Rng& rng) {
    GruLayer l;
    l.u_z = init_weights(n, in, init, rng);
    l.w_z = init_weights(n, n, init, rng);
    l.b_z = Matrix::Zero(n, 1);
    l.u_r = init_weights(n, in, init, rng);
    l.w_r = init_weights(n, n, init, rng);
    l.b_r = Matrix::Zero(n, 1);
    l.u_h = init_weights(n, in, init, rng);
    l.w_h = init_weights(n, n, init, rng);
    l.b_h = Matrix::Zero(n, 1);
    return l;
}

inline Gru make_gru(const std::vector<int>& widths, Activation act, Init init, std::uint64_t seed,
                    int sequence_length = static_cast<int>(kSlotsPerDay)) {
    require(!widths.empty(), "GRU needs at least one layer");
    require(sequence_length >= 1, "sequence length must be >= 1");
    Rng rng(seed);
    Gru g;
    g.hidden_activation = act;
    g.sequence_length = sequence_length;
    Eigen::Index in = 1;
    for (int n : widths) {
        require(n >= 1, "layer width must be >= 1");
        g.layers.push_back(make_gru_layer(in, n, init, rng));
        in = n;
    }
    g.v = init_weights(2, in, init, rng);
    g.b_o = Matrix::Zero(2, 1);
    return g;
}

inline std::vector<TensorRef> tensors(Gru& g) {
    std::vector<TensorRef> out;
    for (std::size_t l = 0; l < g.layers.size(); ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        auto& L = g.layers[l];
        out.insert(out.end(), {{p + "u_z", &L.u_z}, {p + "w_z", &L.w_z}, {p + "b_z", &L.b_z},
                               {p + "u_r", &L.u_r}, {p + "w_r", &L.w_r}, {p + "b_r", &L.b_r},
                               {p + "u_h", &L.u_h}, {p + "w_h", &L.w_h}, {p + "b_h", &L.b_h}});
    }
    out.push_back({"v", &g.v});
    out.push_back({"b_o", &g.b_o});
    return out;
}
inline std::vector<ConstTensorRef> tensors(const Gru& g) {
    std::vector<ConstTensorRef> out;
    for (auto& t : tensors(const_cast<Gru&>(g))) out.push_back({t.name, t.value});
    return out;
}

inline Gru zeros_like(const Gru& g) {
    Gru z = g;
    for (auto& t : tensors(z)) t.value->setZero();
    return z;
}

struct GruLayerCache {
    Matrix input;  // in x T*B
    Matrix z, r, h;
    Matrix s;      // N x (T+1)*B, block 0 is the zero initial state
    Matrix out;    // act(s) with dropout, fed to the next layer (hidden layers only)
    Matrix mask;
};

struct GruCache {
    std::vector<GruLayerCache> layers;
    Eigen::Index batch = 0;
    Eigen::Index steps = 0;
};

/// Logits (2 x batch); X holds one sequence per column (steps x batch).
inline Matrix gru_logits(const Gru& g, const Matrix& x, const ForwardMode& mode = {}, GruCache* cache = nullptr) {
    require(!g.layers.empty(), "GRU has no layers");
    if (x.rows() != g.sequence_length)
        throw ValidationError("GRU expects sequences of length " + std::to_string(g.sequence_length) + ", got " +
                              std::to_string(x.rows()));
    const Eigen::Index B = x.cols();
    const Eigen::Index T = x.rows();
    Rng rng(mode.mask_seed);

    // Row t of X becomes columns [t*B, (t+1)*B) of a 1 x T*B input.
    Matrix input(1, T * B);
    for (Eigen::Index t = 0; t < T; ++t) input.middleCols(t * B, B) = x.row(t);

    GruCache local;
    GruCache& c = cache ? *cache : local;
    c = {};
    c.batch = B;
    c.steps = T;
    c.layers.resize(g.layers.size());

    for (std::size_t l = 0; l < g.layers.size(); ++l) {
        const GruLayer& L = g.layers[l];
        GruLayerCache& lc = c.layers[l];
        const Eigen::Index N = L.width();
        if (input.rows() != L.input_width()) throw ValidationError("GRU layer input width mismatch");
        Matrix xz = L.u_z * input;
        xz.colwise() += L.b_z.col(0);
        Matrix xr = L.u_r * input;
        xr.colwise() += L.b_r.col(0);
        Matrix xh = L.u_h * input;
        xh.colwise() += L.b_h.col(0);

        lc.z.resize(N, T * B);
        lc.r.resize(N, T * B);
        lc.h.resize(N, T * B);
        lc.s = Matrix::Zero(N, (T + 1) * B);
        Matrix tmp(N, B);
        for (Eigen::Index t = 0; t < T; ++t) {
            const auto s_prev = lc.s.middleCols(t * B, B);
            tmp.noalias() = L.w_z * s_prev;
            lc.z.middleCols(t * B, B) = sigmoid(xz.middleCols(t * B, B) + tmp);
            tmp.noalias() = L.w_r * s_prev;
            lc.r.middleCols(t * B, B) = sigmoid(xr.middleCols(t * B, B) + tmp);
            const Matrix rs = (s_prev.array() * lc.r.middleCols(t * B, B).array()).matrix();
            tmp.noalias() = L.w_h * rs;
            lc.h.middleCols(t * B, B) = (xh.middleCols(t * B, B) + tmp).array().tanh().matrix();
            const auto z = lc.z.middleCols(t * B, B).array();
            lc.s.middleCols((t + 1) * B, B) =
                ((1.0 - z) * lc.h.middleCols(t * B, B).array() + z * s_prev.array()).matrix();
        }
        lc.input = std::move(input);
        if (l + 1 < g.layers.size()) {
            Matrix out = activate(lc.s.rightCols(T * B), g.hidden_activation);
            if (mode.dropping()) {
                lc.mask = dropout_mask(out.rows(), out.cols(), mode.dropout, rng);
                out.array() *= lc.mask.array();
            }
            input = out;
            if (cache) lc.out = std::move(out);
        }
        if (!cache && l > 0) {
            // Free the cache of the layer below as we go when nobody needs it.
            c.layers[l - 1] = {};
        }
    }
    Matrix logits = g.v * c.layers.back().s.rightCols(B);
    logits.colwise() += g.b_o.col(0);
    return logits;
}

/// BPTT through every step and layer given dL/dlogits.
inline Gru gru_backward(const Gru& g, const GruCache& c, const Matrix& dlogits) {
    Gru grad = zeros_like(g);
    const Eigen::Index B = c.batch;
    const Eigen::Index T = c.steps;

    const Matrix& s_top = c.layers.back().s;
    grad.v.noalias() = dlogits * s_top.rightCols(B).transpose();
    grad.b_o = dlogits.rowwise().sum();

    // d_out: gradient w.r.t. this layer's state s_t for t = 1..T (N x T*B), coming from above.
    Matrix d_state = Matrix::Zero(g.layers.back().width(), T * B);
    d_state.rightCols(B) = g.v.transpose() * dlogits;

    for (std::size_t l = g.layers.size(); l-- > 0;) {
        const GruLayer& L = g.layers[l];
        const GruLayerCache& lc = c.layers[l];
        GruLayer& G = grad.layers[l];
        const Eigen::Index N = L.width();

        Matrix da_z(N, T * B), da_r(N, T * B), da_h(N, T * B);
        Matrix ds_next = Matrix::Zero(N, B);
        Matrix tmp(N, B);
        for (Eigen::Index t = T; t-- > 0;) {
            const auto cols = [&](const Matrix& m) { return m.middleCols(t * B, B).array(); };
            const Eigen::ArrayXXd ds = cols(d_state) + ds_next.array();
            const Eigen::ArrayXXd s_prev = lc.s.middleCols(t * B, B).array();
            const Eigen::ArrayXXd z = cols(lc.z), r = cols(lc.r), h = cols(lc.h);

            const Eigen::ArrayXXd dah = ds * (1.0 - z) * (1.0 - h.square());
            da_h.middleCols(t * B, B) = dah.matrix();
            tmp.noalias() = L.w_h.transpose() * dah.matrix();
            const Eigen::ArrayXXd d_rs = tmp.array();
            const Eigen::ArrayXXd daz = ds * (s_prev - h) * z * (1.0 - z);
            const Eigen::ArrayXXd dar = d_rs * s_prev * r * (1.0 - r);
            da_z.middleCols(t * B, B) = daz.matrix();
            da_r.middleCols(t * B, B) = dar.matrix();

            ds_next = (ds * z + d_rs * r).matrix();
            ds_next.noalias() += L.w_z.transpose() * daz.matrix();
            ds_next.noalias() += L.w_r.transpose() * dar.matrix();
        }

        const auto s_prev_all = lc.s.leftCols(T * B);
        const Matrix rs_all = (s_prev_all.array() * lc.r.array()).matrix();
        G.w_z.noalias() = da_z * s_prev_all.transpose();
        G.w_r.noalias() = da_r * s_prev_all.transpose();
        G.w_h.noalias() = da_h * rs_all.transpose();
        G.u_z.noalias() = da_z * lc.input.transpose();
        G.u_r.noalias() = da_r * lc.input.transpose();
        G.u_h.noalias() = da_h * lc.input.transpose();
        G.b_z = da_z.rowwise().sum();
        G.b_r = da_r.rowwise().sum();
        G.b_h = da_h.rowwise().sum();

        if (l == 0) break;
        Matrix d_in = L.u_z.transpose() * da_z;
        d_in.noalias() += L.u_r.transpose() * da_r;
        d_in.noalias() += L.u_h.transpose() * da_h;
        const GruLayerCache& below = c.layers[l - 1];
        if (below.mask.size() > 0) d_in.array() *= below.mask.array();
        d_state = (d_in.array() * activation_grad(below.s.rightCols(T * B), g.hidden_activation).array()).matrix();
    }
    return grad;
}

inline Prediction gru_forward(const Gru& g, std::span<const double> sequence, const ForwardMode& mode = {}) {
    const Matrix col = Eigen::Map<const Matrix>(sequence.data(), static_cast<Eigen::Index>(sequence.size()), 1);
    const Matrix p = softmax(gru_logits(g, col, mode));
    Prediction out;
    out.probs = {p(0, 0), p(1, 0)};
    out.label = decide(p(0, 0), p(1, 0));
    return out;
}

/// Per-neuron max-norm. A gate unit's incoming weights are its row of U
/// together with its row of W; output units use their row of V.
inline void apply_max_norm(Gru& g, double limit) {
    for (auto& L : g.layers) {
        clamp_row_norms(L.u_z, 0, L.u_z.rows(), &L.w_z, 0, limit);
        clamp_row_norms(L.u_r, 0, L.u_r.rows(), &L.w_r, 0, limit);
        clamp_row_norms(L.u_h, 0, L.u_h.rows(), &L.w_h, 0, limit);
    }
    clamp_row_norms(g.v, 0, g.v.rows(), nullptr, 0, limit);
}

inline double max_incoming_norm(const Gru& g) {
    double mx = 0.0;
    auto pair = [&](const Matrix& u, const Matrix& w) {
        for (Eigen::Index r = 0; r < u.rows(); ++r)
            mx = std::max(mx, std::sqrt(u.row(r).squaredNorm() + w.row(r).squaredNorm()));
    };
    for (const auto& L : g.layers) {
        pair(L.u_z, L.w_z);
        pair(L.u_r, L.w_r);
        pair(L.u_h, L.w_h);
    }
    for (Eigen::Index r = 0; r < g.v.rows(); ++r) mx = std::max(mx, g.v.row(r).norm());
    return mx;
}

}  // namespace evguard::detector
