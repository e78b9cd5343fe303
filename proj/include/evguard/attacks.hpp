#pragma once

// False-SoC reporting attacks applied to a day of true readings.
//
//   A1  RS(t) = alpha * S(t)
//   A2  RS(t) = beta(t) * S(t),      beta(t) ~ U[beta_low, beta_high] per slot
//   A3  RS(t) = 0 on [t_begin, t_end], S(t) elsewhere
//   A4  RS(t) = ramp(t) * S(t_begin) on [t_begin, t_end], S(t) elsewhere,
//       ramp linear from ramp_start to ramp_end across the window

#include <algorithm>
#include <cstdint>
#include <string>

#include "evguard/core.hpp"
#include "evguard/rng.hpp"
#include "evguard/soc_model.hpp"

namespace evguard {

enum class AttackKind { A1 = 1, A2 = 2, A3 = 3, A4 = 4 };

struct AttackSpec {
    AttackKind kind = AttackKind::A1;
    double alpha = 0.5;
    double beta_low = 0.1;
    double beta_high = 0.8;
    int t_begin = 0;
    int t_end = 0;
    double ramp_start = 0.9;
    double ramp_end = 0.1;
    std::uint64_t seed = 0;

    void validate() const {
        auto mult = [](double v) { return v >= 0.0 && v < 1.0; };
        switch (kind) {
        case AttackKind::A1:
            require(alpha > 0.0 && alpha < 1.0, "A1 alpha must be in (0,1)");
            break;
        case AttackKind::A2:
            require(mult(beta_low) && mult(beta_high) && beta_low <= beta_high, "A2 needs 0 <= beta_low <= beta_high < 1");
            break;
        case AttackKind::A4:
            require(mult(ramp_start) && mult(ramp_end), "A4 ramp endpoints must be in [0,1)");
            [[fallthrough]];
        case AttackKind::A3:
            require(0 <= t_begin && t_begin <= t_end && t_end < static_cast<int>(kSlotsPerDay),
                    "attack window needs 0 <= t_begin <= t_end <= 47");
            break;
        default:
            throw ValidationError("unknown attack kind");
        }
    }
};

/// Reported series RS for a true series S under the given attack.
inline SocSeries apply_attack(const SocSeries& truth, const AttackSpec& spec) {
    spec.validate();
    SocSeries rs = truth;
    switch (spec.kind) {
    case AttackKind::A1:
        for (auto& v : rs) v *= spec.alpha;
        break;
    case AttackKind::A2: {
        Rng rng(spec.seed);
        for (auto& v : rs) v *= rng.uniform(spec.beta_low, spec.beta_high);
        break;
    }
    case AttackKind::A3:
        for (int t = spec.t_begin; t <= spec.t_end; ++t) rs[t] = 0.0;
        break;
    case AttackKind::A4: {
        const double anchor = truth[spec.t_begin];
        const int len = spec.t_end - spec.t_begin + 1;
        for (int k = 0; k < len; ++k) {
            const double frac = len == 1 ? 0.0 : static_cast<double>(k) / (len - 1);
            rs[spec.t_begin + k] = (spec.ramp_start + (spec.ramp_end - spec.ramp_start) * frac) * anchor;
        }
        break;
    }
    }
    for (auto& v : rs) v = std::clamp(v, 0.0, 1.0);
    return rs;
}

inline SocDay apply_attack(const SocDay& day, const AttackSpec& spec) {
    SocDay out = day;
    out.soc = apply_attack(day.soc, spec);
    return out;
}

/// Ranges used when attacks are sampled per dataset row.
struct AttackSampling {
    double alpha_low = 0.1;
    double alpha_high = 0.8;
    double beta_low = 0.1;
    double beta_high = 0.8;
    int window_begin_min = 4;
    int window_begin_max = 30;
    int window_len_min = 8;
    int window_len_max = 20;
};

/// Draws a concrete attack for one row; the result only depends on `seed`.
inline AttackSpec sample_attack(AttackKind kind, std::uint64_t seed, const AttackSampling& s = {}) {
    Rng rng(seed);
    AttackSpec spec;
    spec.kind = kind;
    spec.beta_low = s.beta_low;
    spec.beta_high = s.beta_high;
    spec.seed = rng.next();
    switch (kind) {
    case AttackKind::A1:
        spec.alpha = rng.uniform(s.alpha_low, s.alpha_high);
        break;
    case AttackKind::A2:
        break;
    case AttackKind::A3:
    case AttackKind::A4: {
        spec.t_begin = static_cast<int>(rng.uniform_int(s.window_begin_min, s.window_begin_max));
        const int len = static_cast<int>(rng.uniform_int(s.window_len_min, s.window_len_max));
        spec.t_end = std::min(spec.t_begin + len - 1, static_cast<int>(kSlotsPerDay) - 1);
        break;
    }
    }
    return spec;
}

}  // namespace evguard
