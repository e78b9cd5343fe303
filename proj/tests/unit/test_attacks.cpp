#include <gtest/gtest.h>

#include "evguard/attacks.hpp"

using namespace evguard;

namespace {

SocSeries random_series(Rng& rng) {
    SocSeries s{};
    for (auto& v : s) v = rng.uniform();
    return s;
}

AttackSpec spec_of(AttackKind k, int tb = 0, int te = 0) {
    AttackSpec s;
    s.kind = k;
    s.t_begin = tb;
    s.t_end = te;
    return s;
}

}  // namespace

TEST(Attack, A1ScalesEverySlot) {
    SocSeries s{};
    s[0] = 0.8;
    s[1] = 0.6;
    auto spec = spec_of(AttackKind::A1);
    spec.alpha = 0.5;
    const auto r = apply_attack(s, spec);
    EXPECT_DOUBLE_EQ(r[0], 0.4);
    EXPECT_DOUBLE_EQ(r[1], 0.3);
}

TEST(Attack, A3ZeroesWindowOnly) {
    SocSeries s{};
    s.fill(0.7);
    const auto r = apply_attack(s, spec_of(AttackKind::A3, 10, 20));
    for (int t = 0; t < 48; ++t) EXPECT_EQ(r[t], (t >= 10 && t <= 20) ? 0.0 : 0.7);
}

TEST(Attack, A4LinearRamp) {
    SocSeries s{};
    s.fill(0.5);
    s[5] = 0.8;
    const auto r = apply_attack(s, spec_of(AttackKind::A4, 5, 9));
    const double expect[] = {0.72, 0.56, 0.40, 0.24, 0.08};
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(r[5 + k], expect[k], 1e-12);
    EXPECT_EQ(r[4], 0.5);
    EXPECT_EQ(r[10], 0.5);
}

TEST(Attack, InvalidSpecs) {
    SocSeries s{};
    EXPECT_THROW(apply_attack(s, spec_of(AttackKind::A3, 20, 10)), ValidationError);
    EXPECT_THROW(apply_attack(s, spec_of(AttackKind::A4, 0, 48)), ValidationError);
    auto a1 = spec_of(AttackKind::A1);
    a1.alpha = 1.0;
    EXPECT_THROW(apply_attack(s, a1), ValidationError);
    auto a2 = spec_of(AttackKind::A2);
    a2.beta_low = 0.9;
    a2.beta_high = 0.2;
    EXPECT_THROW(apply_attack(s, a2), ValidationError);
}

TEST(Attack, NeverExceedsTruthProperty) {
    Rng rng(101);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto s = random_series(rng);
        const auto kind = static_cast<AttackKind>(rng.uniform_int(1, 4));
        const auto spec = sample_attack(kind, rng.next());
        const auto r = apply_attack(s, spec);
        for (int t = 0; t < 48; ++t) {
            EXPECT_GE(r[t], 0.0);
            EXPECT_LE(r[t], 1.0);
            const bool in_window = t >= spec.t_begin && t <= spec.t_end;
            switch (kind) {
            case AttackKind::A1:
                EXPECT_LE(r[t], s[t]);
                break;
            case AttackKind::A2:
                EXPECT_GE(r[t], spec.beta_low * s[t] - 1e-15);
                EXPECT_LE(r[t], spec.beta_high * s[t] + 1e-15);
                break;
            case AttackKind::A3:
                if (in_window) EXPECT_EQ(r[t], 0.0);
                else EXPECT_EQ(r[t], s[t]);
                break;
            case AttackKind::A4:
                if (!in_window) EXPECT_EQ(r[t], s[t]);
                else if (s[spec.t_begin] <= s[t]) EXPECT_LE(r[t], s[t]);
                break;
            }
        }
    }
}

TEST(SampleAttack, WindowWithinConfiguredRanges) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto spec = sample_attack(AttackKind::A3, seed);
        EXPECT_GE(spec.t_begin, 4);
        EXPECT_LE(spec.t_begin, 30);
        const int len = spec.t_end - spec.t_begin + 1;
        EXPECT_GE(len, 8);
        EXPECT_LE(len, 20);
        EXPECT_LE(spec.t_end, 47);
        const auto a1 = sample_attack(AttackKind::A1, seed);
        EXPECT_GE(a1.alpha, 0.1);
        EXPECT_LT(a1.alpha, 0.8);
    }
}

TEST(SampleAttack, DeterministicPerSeed) {
    Rng rng(4);
    const auto s = random_series(rng);
    for (auto k : {AttackKind::A1, AttackKind::A2, AttackKind::A3, AttackKind::A4}) {
        EXPECT_EQ(apply_attack(s, sample_attack(k, 77)), apply_attack(s, sample_attack(k, 77)));
        if (k != AttackKind::A3) EXPECT_NE(apply_attack(s, sample_attack(k, 77)), apply_attack(s, sample_attack(k, 78)));
    }
}
