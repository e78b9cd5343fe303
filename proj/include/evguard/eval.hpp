#pragma once

// Confusion-matrix metrics and ROC/AUC with "lying" as the positive class.
//
// Note that DR here is TP / (TP + FP), i.e. precision on the lying class, not
// recall. Recall is reported separately as TPR. FA equals FPR.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "evguard/core.hpp"

namespace evguard {

struct ConfusionCounts {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::size_t total() const { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct MetricSet {
    double acc = 0, tpr = 0, fpr = 0, dr = 0, fa = 0, hd = 0;
    std::optional<double> auc;
};

inline ConfusionCounts confusion(std::span<const Label> labels, std::span<const Label> predicted) {
    if (labels.size() != predicted.size())
        throw ValidationError("confusion: " + std::to_string(labels.size()) + " labels vs " +
                              std::to_string(predicted.size()) + " predictions");
    require(!labels.empty(), "confusion needs at least one sample");
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool pos = labels[i] == Label::Lying;
        const bool pred_pos = predicted[i] == Label::Lying;
        if (pos && pred_pos) ++c.tp;
        else if (!pos && !pred_pos) ++c.tn;
        else if (!pos && pred_pos) ++c.fp;
        else ++c.fn;
    }
    return c;
}

namespace detail {
inline double ratio_or_throw(std::size_t num, std::size_t den, const char* name) {
    if (den == 0) throw UndefinedMetric(name);
    return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace detail

inline double accuracy(const ConfusionCounts& c) { return detail::ratio_or_throw(c.tp + c.tn, c.total(), "ACC"); }
inline double true_positive_rate(const ConfusionCounts& c) { return detail::ratio_or_throw(c.tp, c.tp + c.fn, "TPR"); }
inline double false_positive_rate(const ConfusionCounts& c) { return detail::ratio_or_throw(c.fp, c.fp + c.tn, "FPR"); }
inline double detection_rate(const ConfusionCounts& c) { return detail::ratio_or_throw(c.tp, c.tp + c.fp, "DR"); }
inline double false_acceptance(const ConfusionCounts& c) { return detail::ratio_or_throw(c.fp, c.tn + c.fp, "FA"); }

/// All metrics; throws UndefinedMetric naming the first metric with a zero denominator.
inline MetricSet metrics(const ConfusionCounts& c) {
    MetricSet m;
    m.acc = accuracy(c);
    m.tpr = true_positive_rate(c);
    m.fpr = false_positive_rate(c);
    m.dr = detection_rate(c);
    m.fa = false_acceptance(c);
    m.hd = m.dr - m.fa;
    return m;
}

struct RocPoint {
    double threshold;  // predict lying when score >= threshold
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// Threshold sweep over distinct scores (descending). Equal scores form one
/// step; the curve starts at (0,0) with threshold +inf.
inline RocCurve roc_auc(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) throw ValidationError("roc_auc: scores/labels length mismatch");
    std::size_t pos = 0, neg = 0;
    for (auto l : labels) (l == Label::Lying ? pos : neg)++;
    if (pos == 0 || neg == 0) throw ValidationError("roc_auc needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] == Label::Lying ? tp : fp)++;
            ++i;
        }
        const RocPoint p{s, static_cast<double>(fp) / neg, static_cast<double>(tp) / pos};
        const auto& q = curve.points.back();
        curve.auc += (p.fpr - q.fpr) * (p.tpr + q.tpr) / 2.0;
        curve.points.push_back(p);
    }
    return curve;
}

inline void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "threshold,fpr,tpr\n";
    for (const auto& p : curve.points)
        out << (std::isinf(p.threshold) ? std::string("inf") : fixed(p.threshold)) << ',' << fixed(p.fpr) << ','
            << fixed(p.tpr) << '\n';
}

inline constexpr const char* kMetricsCsvHeader = "model,acc,tpr,fpr,dr,fa,hd,auc";

inline void write_metrics_row(std::ostream& out, const std::string& model, const MetricSet& m) {
    out << model << ',' << fixed(m.acc) << ',' << fixed(m.tpr) << ',' << fixed(m.fpr) << ',' << fixed(m.dr) << ','
        << fixed(m.fa) << ',' << fixed(m.hd) << ',' << (m.auc ? fixed(*m.auc) : std::string("NA")) << '\n';
}

}  // namespace evguard
