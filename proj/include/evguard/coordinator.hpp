#pragma once

// Priority-index knapsack allocation of one slot's charging energy.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evguard/core.hpp"
#include "evguard/rng.hpp"

namespace evguard {

struct ChargingRequest {
    std::string ev_id;
    double reported_soc = 0.0;
    int tcc = 1;  // slots until the request expires
};

/// Default SoC weight: low reported SoC is urgent. The 0.4 boundary belongs to
/// the high-priority side.
inline double default_soc_weight(double soc) { return soc <= 0.4 ? 1.0 : 0.1; }

/// Default TCC weight, defined on 0 < tcc <= 4 only.
inline double default_tcc_weight(int tcc) {
    if (tcc <= 0 || tcc > 4) throw ValidationError("tcc " + std::to_string(tcc) + " outside (0, 4]");
    return 0.4;
}

struct PriorityParams {
    double epsilon = 0.5;
    double battery_units = 200.0;
    std::function<double(double)> soc_weight = default_soc_weight;
    std::function<double(int)> tcc_weight = default_tcc_weight;
};

struct SlotAllocation {
    std::map<std::string, double> grants;
    double leftover = 0.0;
    std::set<std::string> selected_full;
    std::optional<std::string> remainder_recipient;

    double granted(const std::string& id) const {
        auto it = grants.find(id);
        return it == grants.end() ? 0.0 : it->second;
    }
    double total_granted() const {
        double s = 0.0;
        for (const auto& [_, g] : grants) s += g;
        return s;
    }
};

/// Energy comparisons use this slack so that e.g. 12 x 180 fits 2160 despite rounding.
inline constexpr double kEnergyEps = 1e-9;

inline double priority_index(double reported_soc, int tcc, const PriorityParams& params) {
    require(params.epsilon >= 0.0 && params.epsilon <= 1.0, "epsilon must be in [0,1]");
    const double f1 = params.soc_weight(reported_soc);
    const double f2 = params.tcc_weight(tcc);
    require(f1 >= 0.0 && f1 <= 1.0 && f2 >= 0.0 && f2 <= 1.0, "priority weights must map into [0,1]");
    return params.epsilon * f1 + (1.0 - params.epsilon) * f2;
}

inline double demand_units(double soc, const PriorityParams& params) { return (1.0 - soc) * params.battery_units; }

/// Greedy knapsack over requests ordered by PI/demand (descending; ties in
/// seeded random order). Whatever capacity the greedy pass leaves goes to the
/// unserved request with the largest PI.
inline SlotAllocation schedule_slot(const std::vector<ChargingRequest>& requests, double capacity,
                                    const PriorityParams& params, std::uint64_t rng_seed) {
    if (capacity < 0.0) throw ValidationError("capacity must be non-negative");

    struct Candidate {
        std::size_t idx;
        double demand;
        double pi;
        double ratio;
    };
    SlotAllocation alloc;
    std::vector<Candidate> cands;
    cands.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto& r = requests[i];
        require(r.reported_soc >= 0.0 && r.reported_soc <= 1.0, "reported_soc must be in [0,1]");
        require(r.tcc >= 1, "tcc must be >= 1");
        if (!alloc.grants.emplace(r.ev_id, 0.0).second) throw ValidationError("duplicate ev_id " + r.ev_id);
        const double p = demand_units(r.reported_soc, params);
        const double pi = priority_index(r.reported_soc, r.tcc, params);
        if (p <= kEnergyEps) continue;
        cands.push_back({i, p, pi, pi / p});
    }

    Rng rng(rng_seed);
    rng.shuffle(cands);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.ratio > b.ratio; });

    double remaining = capacity;
    std::vector<bool> served(cands.size(), false);
    for (std::size_t k = 0; k < cands.size(); ++k) {
        if (cands[k].demand <= remaining + kEnergyEps) {
            const auto& id = requests[cands[k].idx].ev_id;
            alloc.grants[id] = cands[k].demand;
            alloc.selected_full.insert(id);
            remaining = std::max(0.0, remaining - cands[k].demand);
            served[k] = true;
        }
    }
    if (remaining <= kEnergyEps) remaining = 0.0;

    if (remaining > 0.0) {
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < cands.size(); ++k)
            if (!served[k] && (!best || cands[k].pi > cands[*best].pi)) best = k;
        if (best) {
            const auto& id = requests[cands[*best].idx].ev_id;
            alloc.grants[id] = remaining;
            alloc.remainder_recipient = id;
            remaining = 0.0;
        }
    }
    alloc.leftover = remaining;
    return alloc;
}

}  // namespace evguard
