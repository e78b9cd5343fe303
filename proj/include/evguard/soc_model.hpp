#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "evguard/core.hpp"
#include "evguard/trace_ingest.hpp"

namespace evguard {

/// Battery and drivetrain figures; defaults are the Kia Soul EV.
struct EvParams {
    double battery_kwh = 64.0;
    double range_mi = 230.0;
    double max_charge_kw = 7.2;
    double consumption_wh_per_mi = 275.0;

    void validate() const {
        require(battery_kwh > 0 && range_mi > 0 && max_charge_kw > 0 && consumption_wh_per_mi > 0,
                "EV parameters must be strictly positive");
        const double implied_kwh = consumption_wh_per_mi * range_mi / 1000.0;
        require(std::abs(implied_kwh - battery_kwh) <= 0.02 * battery_kwh,
                "consumption x range must match battery capacity within 2%");
    }
};

struct ChargePolicy {
    int min_parked_minutes = 30;
    double soc_start_threshold = 0.9;
    double target_soc = 1.0;

    void validate() const {
        require(min_parked_minutes >= 0, "min_parked_minutes must be >= 0");
        require(0.0 <= soc_start_threshold && soc_start_threshold <= target_soc && target_soc <= 1.0,
                "charge policy needs 0 <= soc_start_threshold <= target_soc <= 1");
    }
};

struct SocDay {
    std::string ev_id;
    int day = 0;
    SocSeries soc{};
    bool depleted = false;
};

struct SocStep {
    double soc;
    bool depleted;  // the drive would have taken the battery below empty
};

/// One minute of battery evolution. Driving drains linearly with distance,
/// charging adds max_charge_kw for one minute up to target_soc, idling keeps SoC.
inline SocStep step_soc(double soc, const MinuteActivity& activity, bool charging, const EvParams& params,
                        double target_soc = 1.0) {
    if (!activity.parked) {
        const double next = soc - activity.distance * params.consumption_wh_per_mi / (params.battery_kwh * 1000.0);
        if (next < 0.0) return {0.0, true};
        return {std::min(next, 1.0), false};
    }
    if (charging && soc < target_soc) {
        const double next = soc + params.max_charge_kw * (1.0 / 60.0) / params.battery_kwh;
        return {std::clamp(next, 0.0, target_soc), false};
    }
    return {std::clamp(soc, 0.0, 1.0), false};
}

/// Whether a parked EV starts charging. Once started, charging latches until
/// target_soc or departure (handled by simulate_day).
inline bool charging_decision(int parked_run_minutes, double soc, const ChargePolicy& policy) {
    return parked_run_minutes >= policy.min_parked_minutes && soc < policy.soc_start_threshold;
}

/// Minute-by-minute SoC over a day, sampled at the end of each 30-minute slot.
/// parked_run counts the current minute, so a fresh stop has a run of 1.
inline SocDay simulate_day(const DayActivity& minutes, double initial_soc, const EvParams& params,
                           const ChargePolicy& policy, std::string ev_id = {}, int day = 0) {
    if (minutes.size() != static_cast<std::size_t>(kMinutesPerDay))
        throw ValidationError("simulate_day needs 1440 minutes, got " + std::to_string(minutes.size()));
    require(initial_soc >= 0.0 && initial_soc <= 1.0, "initial_soc must be in [0,1]");

    SocDay out{std::move(ev_id), day, {}, false};
    double soc = initial_soc;
    int parked_run = 0;
    bool charging = false;
    for (int m = 0; m < kMinutesPerDay; ++m) {
        const auto& act = minutes[m];
        if (act.parked) {
            ++parked_run;
            if (!charging && charging_decision(parked_run, soc, policy)) charging = true;
        } else {
            parked_run = 0;
            charging = false;
        }
        const auto step = step_soc(soc, act, charging, params, policy.target_soc);
        soc = step.soc;
        out.depleted = out.depleted || step.depleted;
        if (charging && soc >= policy.target_soc) charging = false;
        if ((m + 1) % kMinutesPerSlot == 0) out.soc[m / kMinutesPerSlot] = soc;
    }
    return out;
}

}  // namespace evguard
