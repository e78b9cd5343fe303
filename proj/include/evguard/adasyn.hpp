#pragma once

// ADASYN oversampling of the minority class.
//
//   ratio = m_min / m_max; balancing runs only when ratio < ratio_threshold.
//   G     = (m_max - m_min) * xi synthetic samples in total.
//   r_i   = (majority members among the k nearest neighbours of x_i in the
//           full dataset) / k, normalised to r_hat_i, and g_i = round(r_hat_i * G).
//   Each synthetic sample is x_i + (x_j - x_i) * lambda with x_j one of the k
//   nearest minority neighbours of x_i and lambda ~ U[0, 1].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "evguard/core.hpp"
#include "evguard/dataset.hpp"
#include "evguard/rng.hpp"

namespace evguard {

using Sample = std::vector<double>;

struct AdasynParams {
    int k = 5;
    double xi = 1.0;
    double ratio_threshold = 0.75;
    std::uint64_t seed = 42;
    /// Fixes lambda for every synthetic sample (test hook); drawn when empty.
    std::optional<double> fixed_lambda;

    void validate() const {
        require(k >= 1, "k must be >= 1");
        require(xi >= 0.0 && xi <= 1.0, "xi must be in [0,1]");
        require(ratio_threshold > 0.0 && ratio_threshold <= 1.0, "ratio_threshold must be in (0,1]");
        if (fixed_lambda) require(*fixed_lambda >= 0.0 && *fixed_lambda <= 1.0, "lambda must be in [0,1]");
    }
};

struct AdasynReport {
    double ratio = 0.0;
    double G = 0.0;                 // total requested synthetic count (pre-rounding)
    bool balanced = false;          // false when ratio >= threshold (no-op)
    bool degenerate = false;        // every r_i was zero; r_hat fell back to uniform
    std::vector<double> r;          // raw majority share per minority sample
    std::vector<double> r_hat;      // normalised shares, sum 1
    std::vector<double> g_raw;      // r_hat_i * G
    std::vector<std::size_t> g;     // rounded half-up counts
    std::vector<Sample> synthetic;
    std::vector<std::pair<std::size_t, std::size_t>> parents;  // (i, j) minority indices per synthetic

    std::size_t total_generated() const { return synthetic.size(); }
};

inline double imbalance_ratio(std::size_t m_min, std::size_t m_max) {
    if (m_min == 0 || m_max == 0) throw ValidationError("class counts must be >= 1");
    require(m_max >= m_min, "m_max must be >= m_min");
    return static_cast<double>(m_min) / static_cast<double>(m_max);
}

namespace detail {

inline double squared_distance(const Sample& a, const Sample& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

/// Indices of the k smallest entries of `dist`, ties resolved by index.
inline std::vector<std::size_t> k_smallest(const std::vector<double>& dist, std::size_t k, std::size_t skip) {
    std::vector<std::size_t> idx;
    idx.reserve(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (i != skip) idx.push_back(i);
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    idx.resize(k);
    return idx;
}

}  // namespace detail

/// Brute-force ADASYN. Neighbour lists for r_i span minority + majority;
/// interpolation partners come from minority neighbours only.
inline AdasynReport balance(std::span<const Sample> minority, std::span<const Sample> majority,
                            const AdasynParams& params) {
    params.validate();
    AdasynReport rep;
    const std::size_t m_min = minority.size();
    const std::size_t m_max = majority.size();
    rep.ratio = imbalance_ratio(m_min, m_max);
    if (rep.ratio >= params.ratio_threshold) return rep;

    const auto k = static_cast<std::size_t>(params.k);
    if (m_min < k + 1)
        throw ValidationError("ADASYN needs at least k+1 minority samples (have " + std::to_string(m_min) + ")");
    const std::size_t width = minority.front().size();
    for (const auto& s : minority) require(s.size() == width, "inconsistent feature width");
    for (const auto& s : majority) require(s.size() == width, "inconsistent feature width");

    rep.balanced = true;
    rep.G = static_cast<double>(m_max - m_min) * params.xi;
    rep.r.resize(m_min);

    std::vector<std::vector<std::size_t>> minority_nn(m_min);
    std::vector<double> dist_all(m_min + m_max);
    for (std::size_t i = 0; i < m_min; ++i) {
        for (std::size_t j = 0; j < m_min; ++j) dist_all[j] = detail::squared_distance(minority[i], minority[j]);
        for (std::size_t j = 0; j < m_max; ++j) dist_all[m_min + j] = detail::squared_distance(minority[i], majority[j]);
        const auto nn = detail::k_smallest(dist_all, k, i);
        std::size_t majority_count = 0;
        for (auto n : nn) majority_count += n >= m_min;
        rep.r[i] = static_cast<double>(majority_count) / static_cast<double>(k);

        std::vector<double> dist_min(dist_all.begin(), dist_all.begin() + static_cast<std::ptrdiff_t>(m_min));
        minority_nn[i] = detail::k_smallest(dist_min, k, i);
    }

    double sum_r = 0.0;
    for (double v : rep.r) sum_r += v;
    rep.r_hat.resize(m_min);
    if (sum_r > 0.0) {
        for (std::size_t i = 0; i < m_min; ++i) rep.r_hat[i] = rep.r[i] / sum_r;
    } else {
        rep.degenerate = true;
        std::fill(rep.r_hat.begin(), rep.r_hat.end(), 1.0 / static_cast<double>(m_min));
    }

    rep.g_raw.resize(m_min);
    rep.g.resize(m_min);
    for (std::size_t i = 0; i < m_min; ++i) {
        rep.g_raw[i] = rep.r_hat[i] * rep.G;
        rep.g[i] = static_cast<std::size_t>(std::floor(rep.g_raw[i] + 0.5));
    }

    for (std::size_t i = 0; i < m_min; ++i) {
        Rng rng(derive_seed(params.seed, {0x616461ULL, i}));
        for (std::size_t s = 0; s < rep.g[i]; ++s) {
            const std::size_t j = minority_nn[i][rng.index(minority_nn[i].size())];
            const double lambda = params.fixed_lambda ? *params.fixed_lambda : rng.uniform();
            Sample out(width);
            for (std::size_t d = 0; d < width; ++d) out[d] = minority[i][d] + (minority[j][d] - minority[i][d]) * lambda;
            rep.synthetic.push_back(std::move(out));
            rep.parents.emplace_back(i, j);
        }
    }
    return rep;
}

/// Balances the honest (minority) class of a labeled dataset. Synthetic rows
/// are appended after the original rows as honest, attack 0, with ev_id
/// "adasyn<N>" and the day of their x_i parent.
inline std::pair<LabeledDataset, AdasynReport> balance_dataset(const LabeledDataset& ds, const AdasynParams& params) {
    std::vector<Sample> minority, majority;
    std::vector<std::size_t> minority_rows;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        const auto& r = ds.rows[i];
        Sample s(r.features.begin(), r.features.end());
        if (r.label == Label::Honest) {
            minority.push_back(std::move(s));
            minority_rows.push_back(i);
        } else {
            majority.push_back(std::move(s));
        }
    }
    if (minority.empty() || majority.empty() || minority.size() >= majority.size()) {
        AdasynReport noop;
        if (!minority.empty() && !majority.empty())
            noop.ratio = imbalance_ratio(std::min(minority.size(), majority.size()),
                                         std::max(minority.size(), majority.size()));
        return {ds, std::move(noop)};
    }
    auto rep = balance(minority, majority, params);
    LabeledDataset out = ds;
    for (std::size_t n = 0; n < rep.synthetic.size(); ++n) {
        LabeledRow row;
        row.ev_id = "adasyn" + std::to_string(n);
        row.day = ds.rows[minority_rows[rep.parents[n].first]].day;
        for (std::size_t t = 0; t < kSlotsPerDay; ++t) row.features[t] = std::clamp(rep.synthetic[n][t], 0.0, 1.0);
        out.rows.push_back(std::move(row));
    }
    out.provenance = ds.provenance + " adasyn k=" + std::to_string(params.k) + " xi=" + shortest(params.xi) +
                     " ratio_th=" + shortest(params.ratio_threshold) + " seed=" + std::to_string(params.seed);
    return {std::move(out), std::move(rep)};
}

}  // namespace evguard
