#include <gtest/gtest.h>

#include <sstream>

#include "evguard/eval.hpp"
#include "evguard/rng.hpp"

using namespace evguard;

namespace {

ConfusionCounts counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
    ConfusionCounts c;
    c.tp = tp;
    c.tn = tn;
    c.fp = fp;
    c.fn = fn;
    return c;
}

// Pairwise (Mann-Whitney) AUC: P(score_pos > score_neg) + 0.5 P(tie).
double pairwise_auc(const std::vector<double>& s, const std::vector<Label>& y) {
    double wins = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (y[i] == Label::Lying && y[j] == Label::Honest) {
                ++pairs;
                wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
            }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST(Metrics, WorkedExample) {
    const auto m = metrics(counts(90, 95, 5, 10));
    EXPECT_DOUBLE_EQ(m.acc, 0.925);
    EXPECT_DOUBLE_EQ(m.tpr, 0.9);
    EXPECT_NEAR(m.dr, 0.94737, 5e-6);
    EXPECT_DOUBLE_EQ(m.fa, 0.05);
    EXPECT_NEAR(m.hd, 0.89737, 5e-6);
    EXPECT_DOUBLE_EQ(m.fpr, m.fa);
}

TEST(Metrics, NoPredictedPositivesLeavesDrUndefined) {
    try {
        metrics(counts(0, 5, 0, 5));
        FAIL();
    } catch (const UndefinedMetric& e) {
        EXPECT_EQ(e.metric(), "DR");
    }
}

TEST(Metrics, PerfectDetector) {
    const auto m = metrics(counts(4, 6, 0, 0));
    EXPECT_EQ(m.acc, 1.0);
    EXPECT_EQ(m.dr, 1.0);
    EXPECT_EQ(m.fa, 0.0);
    EXPECT_EQ(m.hd, 1.0);
}

TEST(Confusion, LengthMismatchIsError) {
    const std::vector<Label> a{Label::Honest}, b{Label::Honest, Label::Lying};
    EXPECT_THROW(confusion(a, b), ValidationError);
}

TEST(Metrics, AllFourSamplePatterns) {
    for (unsigned ym = 0; ym < 16; ++ym)
        for (unsigned pm = 0; pm < 16; ++pm) {
            std::vector<Label> y, p;
            int tp = 0, tn = 0, fp = 0, fn = 0;
            for (int i = 0; i < 4; ++i) {
                const bool yl = (ym >> i) & 1u, pl = (pm >> i) & 1u;
                y.push_back(yl ? Label::Lying : Label::Honest);
                p.push_back(pl ? Label::Lying : Label::Honest);
                tp += yl && pl;
                tn += !yl && !pl;
                fp += !yl && pl;
                fn += yl && !pl;
            }
            const auto c = confusion(y, p);
            ASSERT_EQ(c, counts(tp, tn, fp, fn));
            EXPECT_DOUBLE_EQ(accuracy(c), (tp + tn) / 4.0);
            const bool pos = tp + fn > 0, neg = fp + tn > 0, pred_pos = tp + fp > 0;
            if (pos) EXPECT_DOUBLE_EQ(true_positive_rate(c), static_cast<double>(tp) / (tp + fn));
            else EXPECT_THROW(true_positive_rate(c), UndefinedMetric);
            if (neg) EXPECT_DOUBLE_EQ(false_acceptance(c), static_cast<double>(fp) / (fp + tn));
            else EXPECT_THROW(false_acceptance(c), UndefinedMetric);
            if (pred_pos) EXPECT_DOUBLE_EQ(detection_rate(c), static_cast<double>(tp) / (tp + fp));
            else EXPECT_THROW(detection_rate(c), UndefinedMetric);
            if (pos && neg && pred_pos) {
                const auto m = metrics(c);
                EXPECT_DOUBLE_EQ(m.hd, static_cast<double>(tp) / (tp + fp) - static_cast<double>(fp) / (fp + tn));
            } else {
                EXPECT_THROW(metrics(c), UndefinedMetric);
            }
        }
}

TEST(RocAuc, FourPointExample) {
    const std::vector<double> s{0.9, 0.8, 0.7, 0.1};
    const std::vector<Label> y{Label::Lying, Label::Honest, Label::Lying, Label::Honest};
    const auto roc = roc_auc(s, y);
    EXPECT_DOUBLE_EQ(roc.auc, 0.75);
    EXPECT_EQ(roc.points.front().fpr, 0.0);
    EXPECT_EQ(roc.points.back().tpr, 1.0);
    EXPECT_EQ(roc.points.back().fpr, 1.0);
}

TEST(RocAuc, SingleClassIsError) {
    const std::vector<double> s{0.1, 0.2};
    const std::vector<Label> y{Label::Lying, Label::Lying};
    EXPECT_THROW(roc_auc(s, y), ValidationError);
}

TEST(RocAuc, AllTiedScoresGiveHalf) {
    const std::vector<double> s(6, 0.4);
    const std::vector<Label> y{Label::Lying, Label::Honest, Label::Lying, Label::Honest, Label::Honest, Label::Lying};
    EXPECT_DOUBLE_EQ(roc_auc(s, y).auc, 0.5);
}

TEST(RocAuc, MatchesPairwiseOracleProperty) {
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(2, 40));
        std::vector<double> s(n);
        std::vector<Label> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng.uniform_int(0, 8)) / 8.0;  // coarse grid forces ties
            y[i] = rng.bernoulli(0.5) ? Label::Lying : Label::Honest;
        }
        y[0] = Label::Lying;
        y[1] = Label::Honest;
        const auto roc = roc_auc(s, y);
        EXPECT_NEAR(roc.auc, pairwise_auc(s, y), 1e-12);
        for (std::size_t i = 1; i < roc.points.size(); ++i) {
            EXPECT_GE(roc.points[i].fpr, roc.points[i - 1].fpr);
            EXPECT_GE(roc.points[i].tpr, roc.points[i - 1].tpr);
        }
    }
}

TEST(MetricsCsv, RowFormat) {
    auto m = metrics(counts(90, 95, 5, 10));
    std::ostringstream out;
    write_metrics_row(out, "gru", m);
    EXPECT_EQ(out.str(), "gru,0.925000,0.900000,0.050000,0.947368,0.050000,0.897368,NA\n");
    m.auc = 0.75;
    std::ostringstream out2;
    write_metrics_row(out2, "mlp", m);
    EXPECT_TRUE(out2.str().ends_with(",0.750000\n"));
}
