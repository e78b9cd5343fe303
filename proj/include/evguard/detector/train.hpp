#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "evguard/dataset.hpp"
#include "evguard/detector/model.hpp"
#include "evguard/detector/optimizer.hpp"
#include "evguard/eval.hpp"

namespace evguard::detector {

/// Samples as columns of `x` with matching labels.
struct Examples {
    Matrix x;
    std::vector<Label> y;

    std::size_t size() const { return y.size(); }
};

inline Examples to_examples(const LabeledDataset& ds) {
    Examples e;
    e.x.resize(static_cast<Eigen::Index>(kSlotsPerDay), static_cast<Eigen::Index>(ds.rows.size()));
    e.y.reserve(ds.rows.size());
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        for (std::size_t t = 0; t < kSlotsPerDay; ++t)
            e.x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = ds.rows[i].features[t];
        e.y.push_back(ds.rows[i].label);
    }
    return e;
}

inline Examples gather(const Examples& e, std::span<const std::size_t> idx) {
    Examples out;
    out.x.resize(e.x.rows(), static_cast<Eigen::Index>(idx.size()));
    out.y.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.x.col(static_cast<Eigen::Index>(k)) = e.x.col(static_cast<Eigen::Index>(idx[k]));
        out.y.push_back(e.y[idx[k]]);
    }
    return out;
}

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double valid_dr = 0.0;
    double valid_fa = 0.0;
    double valid_acc = 0.0;
    double valid_hd = 0.0;
};

template <class Net>
struct TrainResult {
    Net model;
    std::vector<EpochStats> history;
    int best_epoch = 0;
};

/// Validation-style metrics where an empty denominator counts as 0 rather than
/// throwing (an all-honest prediction has DR 0).
inline EpochStats lenient_metrics(std::span<const Label> labels, std::span<const Label> predicted) {
    const auto c = confusion(labels, predicted);
    auto frac = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    EpochStats s;
    s.valid_dr = frac(c.tp, c.tp + c.fp);
    s.valid_fa = frac(c.fp, c.fp + c.tn);
    s.valid_acc = frac(c.tp + c.tn, c.total());
    s.valid_hd = s.valid_dr - s.valid_fa;
    return s;
}

namespace detail {

/// Sample order that depends only on content, so the input row order of the
/// training set never affects the batches.
inline std::vector<std::size_t> canonical_order(const Examples& e) {
    std::vector<std::size_t> idx(e.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = e.x.col(static_cast<Eigen::Index>(a));
        const auto cb = e.x.col(static_cast<Eigen::Index>(b));
        for (Eigen::Index r = 0; r < ca.size(); ++r)
            if (ca(r) != cb(r)) return ca(r) < cb(r);
        return static_cast<int>(e.y[a]) < static_cast<int>(e.y[b]);
    });
    return idx;
}

}  // namespace detail

using EpochCallback = std::function<void(const EpochStats&)>;

/// Mini-batch training from an initialised network. Returns the epoch-best
/// parameters by validation HD (earliest epoch wins ties).
template <class Net>
TrainResult<Net> train_network(Net net, const Examples& train_set, const Examples& valid_set, const TrainConfig& cfg,
                               const EpochCallback& on_epoch = {}) {
    cfg.validate();
    require(train_set.size() > 0, "training set is empty");
    require(valid_set.size() > 0, "validation set is empty");

    const auto base = detail::canonical_order(train_set);
    OptimizerState opt;
    TrainResult<Net> result;
    result.model = net;
    double best_hd = -std::numeric_limits<double>::infinity();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        auto order = base;
        Rng shuffle(derive_seed(cfg.seed, {0x73687566ULL, static_cast<std::uint64_t>(epoch)}));
        shuffle.shuffle(order);

        double loss_sum = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
            const std::size_t n = std::min(order.size() - b0, static_cast<std::size_t>(cfg.batch_size));
            const Examples batch = gather(train_set, std::span(order).subspan(b0, n));
            ForwardMode mode;
            mode.train = true;
            mode.dropout = cfg.dropout;
            mode.mask_seed = derive_seed(cfg.seed, {0x64726f70ULL, static_cast<std::uint64_t>(epoch), batch_index});
            LossGradient<Net> lg;
            try {
                lg = loss_and_gradients(net, batch.x, batch.y, cfg.loss, mode);
            } catch (const NumericError&) {
                throw NumericError("training diverged at epoch " + std::to_string(epoch));
            }
            loss_sum += lg.loss * static_cast<double>(n);
            sgd_step(net, lg.gradient, cfg, opt);
        }

        EpochStats stats;
        const auto predicted = decide_all(class_probabilities(net, valid_set.x));
        stats = lenient_metrics(valid_set.y, predicted);
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(order.size());
        if (!std::isfinite(stats.train_loss))
            throw NumericError("training diverged at epoch " + std::to_string(epoch));
        result.history.push_back(stats);
        if (on_epoch) on_epoch(stats);
        if (stats.valid_hd > best_hd) {
            best_hd = stats.valid_hd;
            result.model = net;
            result.best_epoch = epoch;
        }
    }
    return result;
}

inline TrainResult<Model> train(const Architecture& arch, const Examples& train_set, const Examples& valid_set,
                                const TrainConfig& cfg, const EpochCallback& on_epoch = {}) {
    const std::uint64_t init_seed = derive_seed(cfg.seed, {0x696e6974ULL});
    const Model init = make_model(arch, cfg.init, init_seed, static_cast<int>(train_set.x.rows()));
    return std::visit(
        [&](const auto& net) {
            auto r = train_network(net, train_set, valid_set, cfg, on_epoch);
            return TrainResult<Model>{Model(std::move(r.model)), std::move(r.history), r.best_epoch};
        },
        init);
}

/// Strict test-set metrics plus AUC on the lying probability.
inline MetricSet evaluate(const Model& model, const Examples& test) {
    const Matrix p = class_probabilities(model, test.x);
    const auto predicted = decide_all(p);
    MetricSet m = metrics(confusion(test.y, predicted));
    std::vector<double> scores(test.size());
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = p(kLyingIndex, static_cast<Eigen::Index>(i));
    m.auc = roc_auc(scores, test.y).auc;
    return m;
}

}  // namespace evguard::detector
