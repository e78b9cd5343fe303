#pragma once

// Multi-slot simulation of honest and lying EVs competing for charging energy.
//
// Each slot every active EV requests charging; liars report beta * true SoC.
// An EV whose grant covers its true demand is counted as charged and replaced
// by a fresh EV of the same type. A partially served EV banks its grant and
// retries with one slot less; when its TCC runs out it is counted as expired
// and replaced.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "evguard/coordinator.hpp"
#include "evguard/core.hpp"
#include "evguard/rng.hpp"

namespace evguard {

struct ImpactConfig {
    int n_evs = 100;
    int n_liars = 0;
    double beta = 0.2;
    double capacity = 2160.0;
    int n_slots = 30;
    double initial_soc = 0.5;
    int initial_tcc = 4;
    double battery_units = 200.0;
    double epsilon = 0.5;
    std::uint64_t seed = 42;

    void validate() const {
        require(n_evs >= 1, "n_evs must be >= 1");
        require(n_liars >= 0 && n_liars <= n_evs, "n_liars must be in [0, n_evs]");
        require(beta >= 0.0 && beta < 1.0, "beta must be in [0,1)");
        require(capacity >= 0.0, "capacity must be non-negative");
        require(n_slots >= 1, "n_slots must be >= 1");
        require(initial_soc >= 0.0 && initial_soc < 1.0, "initial_soc must be in [0,1)");
        require(initial_tcc >= 1, "initial_tcc must be >= 1");
        require(battery_units > 0.0, "battery_units must be positive");
    }
};

struct ImpactReport {
    std::optional<double> p_liar_charged;   // empty when the run has no liars
    std::optional<double> p_honest_charged; // empty when the run has no honest EVs
    double avg_unused_power = 0.0;
    std::vector<double> per_slot_unused;

    // raw outcome counts
    int liars_charged = 0, liars_expired = 0;
    int honest_charged = 0, honest_expired = 0;
};

/// Capacity minus the energy EVs can actually absorb; never negative.
inline double unused_power(const SlotAllocation& alloc, const std::map<std::string, double>& true_demands,
                           double capacity) {
    double used = 0.0;
    for (const auto& [id, grant] : alloc.grants) {
        auto it = true_demands.find(id);
        const double demand = it == true_demands.end() ? 0.0 : it->second;
        used += std::min(grant, std::max(0.0, demand));
    }
    return std::max(0.0, capacity - used);
}

inline ImpactReport run_impact(const ImpactConfig& config) {
    config.validate();

    struct Ev {
        std::string id;
        bool liar;
        double soc;
        int tcc;
    };
    int next_id = 0;
    auto fresh = [&](bool liar) {
        return Ev{(liar ? "L" : "H") + std::to_string(next_id++), liar, config.initial_soc, config.initial_tcc};
    };
    std::vector<Ev> fleet;
    fleet.reserve(config.n_evs);
    for (int i = 0; i < config.n_evs; ++i) fleet.push_back(fresh(i < config.n_liars));

    PriorityParams params;
    params.epsilon = config.epsilon;
    params.battery_units = config.battery_units;

    ImpactReport report;
    std::vector<ChargingRequest> requests;
    std::map<std::string, double> true_demands;
    for (int slot = 0; slot < config.n_slots; ++slot) {
        requests.clear();
        true_demands.clear();
        for (const auto& ev : fleet) {
            const double reported = ev.liar ? config.beta * ev.soc : ev.soc;
            requests.push_back({ev.id, reported, ev.tcc});
            true_demands[ev.id] = (1.0 - ev.soc) * config.battery_units;
        }
        const auto alloc = schedule_slot(requests, config.capacity, params,
                                         derive_seed(config.seed, {static_cast<std::uint64_t>(slot)}));
        report.per_slot_unused.push_back(unused_power(alloc, true_demands, config.capacity));

        for (auto& ev : fleet) {
            const double grant = alloc.granted(ev.id);
            const double need = true_demands[ev.id];
            if (grant > 0.0 && grant >= need - kEnergyEps) {
                (ev.liar ? report.liars_charged : report.honest_charged)++;
                ev = fresh(ev.liar);
                continue;
            }
            ev.soc = std::min(1.0, ev.soc + grant / config.battery_units);
            if (--ev.tcc == 0) {
                (ev.liar ? report.liars_expired : report.honest_expired)++;
                ev = fresh(ev.liar);
            }
        }
    }

    auto prob = [](int charged, int expired) -> std::optional<double> {
        if (charged + expired == 0) return std::nullopt;
        return static_cast<double>(charged) / (charged + expired);
    };
    report.p_liar_charged = config.n_liars > 0 ? prob(report.liars_charged, report.liars_expired) : std::nullopt;
    report.p_honest_charged =
        config.n_liars < config.n_evs ? prob(report.honest_charged, report.honest_expired) : std::nullopt;
    double sum = 0.0;
    for (double u : report.per_slot_unused) sum += u;
    report.avg_unused_power = sum / static_cast<double>(report.per_slot_unused.size());
    return report;
}

inline constexpr const char* kImpactCsvHeader = "n_liars,beta,capacity,p_honest,p_liar,avg_unused";

/// One sweep row; undefined probabilities are written as NA.
inline void write_impact_row(std::ostream& out, const ImpactConfig& config, const ImpactReport& report) {
    auto opt = [](const std::optional<double>& v) { return v ? fixed(*v) : std::string("NA"); };
    out << config.n_liars << ',' << fixed(config.beta) << ',' << fixed(config.capacity) << ','
        << opt(report.p_honest_charged) << ',' << opt(report.p_liar_charged) << ',' << fixed(report.avg_unused_power)
        << '\n';
}

}  // namespace evguard
