#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "evguard/detector.hpp"
#include "evguard/evolution.hpp"

namespace evguard::oracle {

/// Front index of every point as the length of its longest chain of dominators.
inline std::vector<std::size_t> chain_depth(const std::vector<Objectives>& pts) {
    std::vector<int> depth(pts.size(), -1);
    std::function<int(std::size_t)> go = [&](std::size_t i) {
        if (depth[i] >= 0) return depth[i];
        int d = 0;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (dominates(pts[j], pts[i])) d = std::max(d, go(j) + 1);
        return depth[i] = d;
    };
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(static_cast<std::size_t>(go(i)));
    return out;
}

/// True when `fronts` assigns every point to the front given by chain_depth.
inline bool fronts_match(const std::vector<Objectives>& pts, const std::vector<std::vector<std::size_t>>& fronts) {
    const auto depth = chain_depth(pts);
    std::vector<int> seen(pts.size(), 0);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        if (fronts[k].empty()) return false;
        for (auto i : fronts[k]) {
            if (i >= pts.size() || depth[i] != k) return false;
            ++seen[i];
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

/// Points on a 0.1 grid so ties and duplicates are common.
inline std::vector<Objectives> random_points(Rng& rng, std::size_t n) {
    std::vector<Objectives> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({static_cast<double>(rng.uniform_int(0, 10)) / 10.0, static_cast<double>(rng.uniform_int(0, 10)) / 10.0});
    return pts;
}

/// Oracle fitness with a single utopia chromosome: DR rises as the first four
/// genes approach the target, FA falls as the last four do.
inline FitnessFn planted(const Chromosome& target, const SearchSpace& space) {
    const auto sizes = space.sizes();
    return [=](const Chromosome& c) {
        double da = 0, ma = 0, db = 0, mb = 0;
        for (std::size_t g = 0; g < SearchSpace::kGenes; ++g) {
            const double d = std::abs(c.genes[g] - target.genes[g]);
            const double m = std::max<double>(1.0, static_cast<double>(sizes[g]) - 1.0);
            (g < 4 ? da : db) += d;
            (g < 4 ? ma : mb) += m;
        }
        return Objectives{1.0 - da / ma, db / mb};
    };
}

struct TensorError {
    std::string name;
    double relative_error;
};

/// Central differences, one parameter at a time, compared per tensor by
/// ||analytic - numeric|| / max(||analytic||, ||numeric||). Tensors whose
/// gradient is numerically zero on both sides are skipped.
template <class Net>
std::vector<TensorError> gradient_errors(Net net, const detector::Matrix& x, const std::vector<Label>& y,
                                         detector::Loss loss, const detector::ForwardMode& mode, double h = 1e-5) {
    using detector::Matrix;
    const auto analytic = detector::loss_and_gradients(net, x, y, loss, mode).gradient;
    const auto a_tensors = tensors(analytic);
    auto p_tensors = tensors(net);
    std::vector<TensorError> out;
    for (std::size_t k = 0; k < p_tensors.size(); ++k) {
        Matrix& w = *p_tensors[k].value;
        Matrix numeric(w.rows(), w.cols());
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double keep = w(i);
            w(i) = keep + h;
            const double up = detector::detail::loss_from_logits(detector::logits(net, x, mode), y, loss, nullptr);
            w(i) = keep - h;
            const double down = detector::detail::loss_from_logits(detector::logits(net, x, mode), y, loss, nullptr);
            w(i) = keep;
            numeric(i) = (up - down) / (2 * h);
        }
        const Matrix& a = *a_tensors[k].value;
        const double scale = std::max(a.norm(), numeric.norm());
        if (scale < 1e-9) continue;
        out.push_back({p_tensors[k].name, (a - numeric).norm() / scale});
    }
    return out;
}

struct GradientTrial {
    std::string label;
    std::vector<TensorError> errors;
};

/// Twenty small random models cycling through both kinds, all activations,
/// both losses and with or without dropout, each on a 48-step batch of 3.
inline std::vector<GradientTrial> gradient_trials(std::uint64_t seed = 2024, int trials = 20) {
    using namespace detector;
    struct Case {
        ModelKind kind;
        Activation act;
        Loss loss;
        double dropout;
    };
    const Case cases[] = {
        {ModelKind::Mlp, Activation::Tanh, Loss::CrossEntropy, 0.0},
        {ModelKind::Mlp, Activation::Sigmoid, Loss::MeanSquaredError, 0.0},
        {ModelKind::Mlp, Activation::Softsign, Loss::CrossEntropy, 0.3},
        {ModelKind::Mlp, Activation::Relu, Loss::CrossEntropy, 0.0},
        {ModelKind::Gru, Activation::Softsign, Loss::CrossEntropy, 0.0},
        {ModelKind::Gru, Activation::Tanh, Loss::MeanSquaredError, 0.0},
        {ModelKind::Gru, Activation::Sigmoid, Loss::CrossEntropy, 0.3},
        {ModelKind::Gru, Activation::Relu, Loss::CrossEntropy, 0.0},
    };
    Rng rng(seed);
    std::vector<GradientTrial> out;
    for (int trial = 0; trial < trials; ++trial) {
        const Case& c = cases[trial % 8];
        const int layers = 1 + trial % 2;
        const int width = c.kind == ModelKind::Mlp ? 4 : 3;
        Model model = make_model({c.kind, layers, width, c.act}, Init::Normal, rng.next());
        // larger weights than the default init so every path carries signal
        std::visit(
            [&](auto& net) {
                for (auto& t : tensors(net))
                    for (Eigen::Index i = 0; i < t.value->size(); ++i) (*t.value)(i) = rng.normal(0.0, 0.5);
            },
            model);
        Matrix x(48, 3);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform();
        std::vector<Label> y{Label::Lying, Label::Honest, rng.bernoulli(0.5) ? Label::Lying : Label::Honest};
        ForwardMode mode;
        mode.train = c.dropout > 0;
        mode.dropout = c.dropout;
        mode.mask_seed = rng.next();
        GradientTrial t;
        t.label = std::string(to_string(c.kind)) + "/" + std::string(to_string(c.act)) + "/" +
                  std::string(to_string(c.loss)) + " trial " + std::to_string(trial);
        std::visit([&](const auto& net) { t.errors = gradient_errors(net, x, y, c.loss, mode); }, model);
        out.push_back(std::move(t));
    }
    return out;
}

/// Population used for planted-optimum runs. The default of 12 explores about
/// 100 of the 38880 chromosomes in 8 generations and recovers the utopia point
/// in roughly a third of seeds; 96 recovers it in at least 9 of every 10.
inline constexpr int kPlantedPopulation = 96;

/// Number of `seeds` random planted targets that evolve() recovers as the
/// sole archive member.
inline int planted_recoveries(const GaConfig& base, int seeds, std::uint64_t seed = 99) {
    const SearchSpace space;
    Rng rng(seed);
    int found = 0;
    for (int s = 0; s < seeds; ++s) {
        Chromosome target;
        const auto sizes = space.sizes();
        for (std::size_t g = 0; g < SearchSpace::kGenes; ++g) target.genes[g] = static_cast<int>(rng.index(sizes[g]));
        GaConfig cfg = base;
        cfg.seed = rng.next();
        const auto r = evolve(cfg, space, planted(target, space));
        found += r.archive.size() == 1 && r.archive[0].chromosome == target;
    }
    return found;
}

}  // namespace evguard::oracle
