#pragma once

// GPS trace parsing, great-circle distance, per-minute resampling and a
// synthetic trip/idle mobility generator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "evguard/core.hpp"
#include "evguard/rng.hpp"

namespace evguard {

struct GpsFix {
    double latitude = 0.0;
    double longitude = 0.0;
    bool occupied = false;
    std::int64_t timestamp = 0;  // seconds since epoch

    friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

struct VehicleTrace {
    std::string vehicle_id;
    std::vector<GpsFix> fixes;  // strictly increasing timestamps

    friend bool operator==(const VehicleTrace&, const VehicleTrace&) = default;
};

struct MinuteActivity {
    int minute_index = 0;   // 0..1439
    double distance = 0.0;  // miles
    bool parked = true;
};

using DayActivity = std::vector<MinuteActivity>;

inline constexpr double kEarthRadiusMiles = 3958.8;
inline constexpr double kDefaultMaxSpeedMph = 80.0;
/// Minutes that move less than this are treated as parked.
inline constexpr double kParkedDistanceMiles = 0.005;

/// Sorts fixes by timestamp and keeps the first fix seen for each timestamp.
inline void normalize(VehicleTrace& trace) {
    std::stable_sort(trace.fixes.begin(), trace.fixes.end(),
                     [](const GpsFix& a, const GpsFix& b) { return a.timestamp < b.timestamp; });
    auto last = std::unique(trace.fixes.begin(), trace.fixes.end(),
                            [](const GpsFix& a, const GpsFix& b) { return a.timestamp == b.timestamp; });
    trace.fixes.erase(last, trace.fixes.end());
}

/// Parses "latitude longitude occupied timestamp" records, one per line, in any order.
/// Blank lines are skipped.
inline VehicleTrace parse_trace(std::istream& in, std::string vehicle_id = {}) {
    VehicleTrace trace{std::move(vehicle_id), {}};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (!rest.empty()) {
            auto start = rest.find_first_not_of(" \t");
            if (start == std::string_view::npos) break;
            rest.remove_prefix(start);
            auto end = rest.find_first_of(" \t");
            fields.push_back(rest.substr(0, end));
            rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
        }
        if (fields.empty()) continue;
        if (fields.size() != 4)
            throw ParseError(line_no, "expected 4 fields (lat lon occupied timestamp), got " +
                                          std::to_string(fields.size()));
        GpsFix fix;
        int occupied = 0;
        if (!parse_double(fields[0], fix.latitude)) throw ParseError(line_no, "non-numeric latitude");
        if (!parse_double(fields[1], fix.longitude)) throw ParseError(line_no, "non-numeric longitude");
        if (!parse_int(fields[2], occupied) || (occupied != 0 && occupied != 1))
            throw ParseError(line_no, "occupied flag must be 0 or 1");
        if (!parse_int(fields[3], fix.timestamp)) throw ParseError(line_no, "non-numeric timestamp");
        if (!(fix.latitude >= -90.0 && fix.latitude <= 90.0)) throw ParseError(line_no, "latitude out of range");
        if (!(fix.longitude >= -180.0 && fix.longitude <= 180.0))
            throw ParseError(line_no, "longitude out of range");
        if (fix.timestamp <= 0) throw ParseError(line_no, "timestamp must be positive");
        fix.occupied = occupied == 1;
        trace.fixes.push_back(fix);
    }
    normalize(trace);
    return trace;
}

inline VehicleTrace parse_trace(const std::string& text, std::string vehicle_id = {}) {
    std::istringstream in(text);
    return parse_trace(in, std::move(vehicle_id));
}

/// Writes fixes in ascending time order using the round-trip-exact shortest decimal form.
inline void write_trace(std::ostream& out, const VehicleTrace& trace) {
    for (const auto& f : trace.fixes)
        out << shortest(f.latitude) << ' ' << shortest(f.longitude) << ' ' << (f.occupied ? 1 : 0) << ' '
            << f.timestamp << '\n';
}

inline std::string serialize_trace(const VehicleTrace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

inline double haversine_miles(double lat1, double lon1, double lat2, double lon2) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * deg;
    const double dlon = (lon2 - lon1) * deg;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    double h = s1 * s1 + std::cos(lat1 * deg) * std::cos(lat2 * deg) * s2 * s2;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

inline double haversine_miles(const GpsFix& a, const GpsFix& b) {
    return haversine_miles(a.latitude, a.longitude, b.latitude, b.longitude);
}

/// True if any part of the trace's time span touches [day_start, day_start + 1 day).
inline bool covers_day(const VehicleTrace& trace, std::int64_t day_start) {
    if (trace.fixes.empty()) return false;
    const std::int64_t day_end = day_start + 60LL * kMinutesPerDay;
    return trace.fixes.back().timestamp >= day_start && trace.fixes.front().timestamp < day_end;
}

/// Resamples one day of a trace to 1440 minutes. Each inter-fix distance is spread
/// uniformly over its time gap after capping the implied speed at max_speed_mph.
inline DayActivity minutize(const VehicleTrace& trace, std::int64_t day_start,
                            double max_speed_mph = kDefaultMaxSpeedMph) {
    require(max_speed_mph > 0.0, "max_speed_mph must be positive");
    if (!covers_day(trace, day_start))
        throw ValidationError("trace '" + trace.vehicle_id + "' does not overlap the day starting at " +
                              std::to_string(day_start));

    DayActivity minutes(kMinutesPerDay);
    for (int m = 0; m < kMinutesPerDay; ++m) minutes[m].minute_index = m;

    const std::int64_t day_end = day_start + 60LL * kMinutesPerDay;
    const auto& fx = trace.fixes;
    // first pair whose end is after the day start
    auto it = std::upper_bound(fx.begin(), fx.end(), day_start,
                               [](std::int64_t t, const GpsFix& f) { return t < f.timestamp; });
    std::size_t i = it == fx.begin() ? 0 : static_cast<std::size_t>(it - fx.begin()) - 1;
    for (; i + 1 < fx.size() && fx[i].timestamp < day_end; ++i) {
        const auto& a = fx[i];
        const auto& b = fx[i + 1];
        const double gap = static_cast<double>(b.timestamp - a.timestamp);
        if (gap <= 0.0) continue;
        const double dist = std::min(haversine_miles(a, b), max_speed_mph * gap / 3600.0);
        if (dist <= 0.0) continue;
        const double rate = dist / gap;  // miles per second
        const std::int64_t lo = std::max(a.timestamp, day_start);
        const std::int64_t hi = std::min(b.timestamp, day_end);
        for (std::int64_t m = (lo - day_start) / 60; m < kMinutesPerDay; ++m) {
            const std::int64_t ms = day_start + 60 * m;
            if (ms >= hi) break;
            const std::int64_t overlap = std::min(hi, ms + 60) - std::max(lo, ms);
            if (overlap > 0) minutes[m].distance += rate * static_cast<double>(overlap);
        }
    }
    const double per_minute_cap = max_speed_mph / 60.0;
    for (auto& m : minutes) {
        m.distance = std::min(m.distance, per_minute_cap);
        if (m.distance < kParkedDistanceMiles) {
            m.distance = 0.0;
            m.parked = true;
        } else {
            m.parked = false;
        }
    }
    return minutes;
}

/// All-parked day, used for vehicle-days that a trace does not cover.
inline DayActivity parked_day() {
    DayActivity minutes(kMinutesPerDay);
    for (int m = 0; m < kMinutesPerDay; ++m) minutes[m].minute_index = m;
    return minutes;
}

struct MobilityParams {
    double trip_mean_minutes = 20.0;
    double idle_mean_minutes = 40.0;
    double speed_min_mph = 10.0;
    double speed_max_mph = 40.0;
    int fix_interval_seconds = 60;
    // 2008-05-17 00:00:00 UTC
    std::int64_t start_epoch = 1210982400;
    double origin_latitude = 37.7749;
    double origin_longitude = -122.4194;
    /// Half-width of the square (degrees) the vehicle is kept inside.
    double box_half_width_deg = 0.08;
};

/// Two-state trip/idle renewal process sampled every fix_interval_seconds.
/// Coordinates are rounded to 1e-6 degrees so that serialization round-trips.
inline VehicleTrace generate_synthetic_trace(std::uint64_t seed, int num_days, const MobilityParams& mobility = {},
                                             std::string vehicle_id = {}) {
    require(num_days >= 1, "num_days must be >= 1");
    require(mobility.fix_interval_seconds > 0, "fix_interval_seconds must be positive");
    require(mobility.trip_mean_minutes > 0 && mobility.idle_mean_minutes > 0, "episode means must be positive");
    require(mobility.speed_min_mph >= 0 && mobility.speed_max_mph >= mobility.speed_min_mph, "invalid speed range");

    if (vehicle_id.empty()) vehicle_id = "syn" + std::to_string(seed);
    Rng rng(derive_seed(seed, {0x7472616365ULL}));
    VehicleTrace trace{std::move(vehicle_id), {}};

    const int step = mobility.fix_interval_seconds;
    const std::int64_t end = mobility.start_epoch + 86400LL * num_days;
    const std::size_t n_fixes = static_cast<std::size_t>((end - mobility.start_epoch) / step) + 1;
    trace.fixes.reserve(n_fixes);

    constexpr double miles_per_deg_lat = kEarthRadiusMiles * std::numbers::pi / 180.0;
    auto round6 = [](double v) { return std::round(v * 1e6) / 1e6; };
    double lat = mobility.origin_latitude + rng.uniform(-0.5, 0.5) * mobility.box_half_width_deg;
    double lon = mobility.origin_longitude + rng.uniform(-0.5, 0.5) * mobility.box_half_width_deg;
    lat = round6(lat);
    lon = round6(lon);

    std::int64_t t = mobility.start_epoch;
    bool driving = false;
    trace.fixes.push_back({lat, lon, false, t});
    while (t < end) {
        const double mean = driving ? mobility.trip_mean_minutes : mobility.idle_mean_minutes;
        const double minutes = std::max(1.0, std::round(rng.exponential(mean)));
        const auto steps = static_cast<std::int64_t>(minutes * 60.0 / step + 0.5);
        double speed = 0.0, heading = 0.0;
        if (driving) {
            speed = rng.uniform(mobility.speed_min_mph, mobility.speed_max_mph);
            heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        for (std::int64_t s = 0; s < std::max<std::int64_t>(steps, 1) && t < end; ++s) {
            t += step;
            if (driving) {
                const double d = speed * step / 3600.0;
                double nlat = lat + d * std::cos(heading) / miles_per_deg_lat;
                double nlon = lon + d * std::sin(heading) /
                                        (miles_per_deg_lat * std::cos(lat * std::numbers::pi / 180.0));
                // reflect at the box edges
                if (std::abs(nlat - mobility.origin_latitude) > mobility.box_half_width_deg) {
                    heading = std::numbers::pi - heading;
                    nlat = lat - (nlat - lat);
                }
                if (std::abs(nlon - mobility.origin_longitude) > mobility.box_half_width_deg) {
                    heading = -heading;
                    nlon = lon - (nlon - lon);
                }
                lat = round6(nlat);
                lon = round6(nlon);
            }
            trace.fixes.push_back({lat, lon, driving, t});
        }
        driving = !driving;
    }
    return trace;
}

}  // namespace evguard
