#pragma once

// Labeled SoC-day rows: construction from traces, attack expansion, stratified
// split, CSV serialization and the sample autocorrelation diagnostic.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "evguard/attacks.hpp"
#include "evguard/core.hpp"
#include "evguard/rng.hpp"
#include "evguard/soc_model.hpp"
#include "evguard/trace_ingest.hpp"

namespace evguard {

struct LabeledRow {
    std::string ev_id;
    int day = 0;
    SocSeries features{};
    Label label = Label::Honest;
    int attack_id = 0;  // 0 honest, 1..4 attack kind
};

struct LabeledDataset {
    std::vector<LabeledRow> rows;
    std::string provenance;

    std::size_t size() const { return rows.size(); }
    std::size_t count(Label l) const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.label == l;
        return n;
    }
};

inline void validate_row(const LabeledRow& r) {
    require((r.label == Label::Honest) == (r.attack_id == 0), "label/attack mismatch for " + r.ev_id);
    require(r.attack_id >= 0 && r.attack_id <= 4, "attack id must be in 0..4");
    for (double v : r.features) require(v >= 0.0 && v <= 1.0, "feature outside [0,1] for " + r.ev_id);
}

/// Which days to cut from each trace.
struct DayWindow {
    std::int64_t first_day_start = MobilityParams{}.start_epoch;
    int num_days = 24;
};

struct HonestBuildConfig {
    DayWindow window;
    EvParams ev;
    ChargePolicy policy;
    double max_speed_mph = kDefaultMaxSpeedMph;
    double initial_soc_low = 0.3;
    double initial_soc_high = 1.0;
    std::uint64_t seed = 42;
};

/// Appends one honest row per day of the window. Days the trace does not cover
/// are simulated as fully parked. `trace_index` keys the initial-SoC draws.
inline void append_honest_rows(LabeledDataset& out, const VehicleTrace& trace, std::size_t trace_index,
                               const HonestBuildConfig& cfg) {
    for (int d = 0; d < cfg.window.num_days; ++d) {
        const std::int64_t day_start = cfg.window.first_day_start + 86400LL * d;
        const DayActivity minutes =
            covers_day(trace, day_start) ? minutize(trace, day_start, cfg.max_speed_mph) : parked_day();
        Rng rng(derive_seed(cfg.seed, {0x736f63ULL, trace_index, static_cast<std::uint64_t>(d)}));
        const double init = rng.uniform(cfg.initial_soc_low, cfg.initial_soc_high);
        const SocDay day = simulate_day(minutes, init, cfg.ev, cfg.policy, trace.vehicle_id, d);
        out.rows.push_back({trace.vehicle_id, d, day.soc, Label::Honest, 0});
    }
}

inline LabeledDataset build_honest(const std::vector<VehicleTrace>& traces, const HonestBuildConfig& cfg) {
    if (traces.empty()) throw ValidationError("build_honest needs at least one trace");
    require(cfg.window.num_days >= 1, "num_days must be >= 1");
    cfg.ev.validate();
    cfg.policy.validate();
    LabeledDataset ds;
    ds.rows.reserve(traces.size() * static_cast<std::size_t>(cfg.window.num_days));
    for (std::size_t i = 0; i < traces.size(); ++i) append_honest_rows(ds, traces[i], i, cfg);
    ds.provenance = "honest traces=" + std::to_string(traces.size()) + " days=" +
                    std::to_string(cfg.window.num_days) + " seed=" + std::to_string(cfg.seed);
    return ds;
}

/// Synthetic fleet; each trace is generated, consumed and dropped, so memory
/// stays proportional to the dataset rather than to the raw fixes.
inline LabeledDataset build_honest_synthetic(int n_evs, const HonestBuildConfig& cfg, const MobilityParams& mobility = {}) {
    require(n_evs >= 1, "build_honest needs at least one vehicle");
    require(cfg.window.num_days >= 1, "num_days must be >= 1");
    cfg.ev.validate();
    cfg.policy.validate();
    LabeledDataset ds;
    ds.rows.reserve(static_cast<std::size_t>(n_evs) * static_cast<std::size_t>(cfg.window.num_days));
    MobilityParams mob = mobility;
    mob.start_epoch = cfg.window.first_day_start;
    for (int i = 0; i < n_evs; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "ev%03d", i);
        const auto trace = generate_synthetic_trace(derive_seed(cfg.seed, {0x747263ULL, static_cast<std::uint64_t>(i)}),
                                                    cfg.window.num_days, mob, id);
        append_honest_rows(ds, trace, static_cast<std::size_t>(i), cfg);
    }
    ds.provenance = "honest synthetic evs=" + std::to_string(n_evs) + " days=" + std::to_string(cfg.window.num_days) +
                    " seed=" + std::to_string(cfg.seed);
    return ds;
}

/// Four attacked copies (A1..A4) of every honest row, kept in input order.
inline LabeledDataset build_malicious(const LabeledDataset& honest, std::uint64_t seed,
                                      const AttackSampling& sampling = {}) {
    if (honest.rows.empty()) throw ValidationError("build_malicious needs a non-empty honest dataset");
    LabeledDataset out;
    out.rows.reserve(honest.rows.size() * 4);
    for (std::size_t j = 0; j < honest.rows.size(); ++j) {
        const auto& row = honest.rows[j];
        if (row.label != Label::Honest) throw ValidationError("build_malicious input contains lying rows");
        for (int k = 1; k <= 4; ++k) {
            const auto spec = sample_attack(static_cast<AttackKind>(k),
                                            derive_seed(seed, {0x61747461ULL, j, static_cast<std::uint64_t>(k)}), sampling);
            out.rows.push_back({row.ev_id, row.day, apply_attack(row.features, spec), Label::Lying, k});
        }
    }
    out.provenance = "malicious from " + std::to_string(honest.rows.size()) + " honest rows attack_seed=" +
                     std::to_string(seed) + " alpha=[" + shortest(sampling.alpha_low) + "," +
                     shortest(sampling.alpha_high) + "] beta=[" + shortest(sampling.beta_low) + "," +
                     shortest(sampling.beta_high) + "] window_begin=[" + std::to_string(sampling.window_begin_min) +
                     "," + std::to_string(sampling.window_begin_max) + "] window_len=[" +
                     std::to_string(sampling.window_len_min) + "," + std::to_string(sampling.window_len_max) + "]";
    return out;
}

inline LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b) {
    LabeledDataset out;
    out.rows.reserve(a.size() + b.size());
    out.rows.insert(out.rows.end(), a.rows.begin(), a.rows.end());
    out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
    out.provenance = a.provenance + (a.provenance.empty() || b.provenance.empty() ? "" : "; ") + b.provenance;
    return out;
}

/// Stratified split. |train| = round(fraction * N); per-class train counts are
/// floor(fraction * n_c) plus the leftover rows handed out by largest remainder
/// (honest first on ties). Both parts are shuffled by `seed`.
inline std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double train_fraction,
                                                       std::uint64_t seed) {
    require(train_fraction > 0.0 && train_fraction < 1.0, "train_fraction must be in (0,1)");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < ds.rows.size(); ++i) by_class[static_cast<int>(ds.rows[i].label)].push_back(i);

    const auto total = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ds.rows.size())));
    std::size_t take[2];
    double rem[2];
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double exact = train_fraction * static_cast<double>(by_class[c].size());
        take[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
        rem[c] = exact - static_cast<double>(take[c]);
        assigned += take[c];
    }
    while (assigned < total) {
        const int c = (rem[0] >= rem[1] && take[0] < by_class[0].size()) || take[1] >= by_class[1].size() ? 0 : 1;
        ++take[c];
        rem[c] = -1.0;
        ++assigned;
    }

    std::vector<std::size_t> train_idx, test_idx;
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, {0x73706c6974ULL, static_cast<std::uint64_t>(c)}));
        auto idx = by_class[c];
        rng.shuffle(idx);
        train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[c]));
        test_idx.insert(test_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(take[c]), idx.end());
    }
    Rng mix(derive_seed(seed, {0x6d6978ULL}));
    mix.shuffle(train_idx);
    mix.shuffle(test_idx);

    LabeledDataset train, test;
    for (auto i : train_idx) train.rows.push_back(ds.rows[i]);
    for (auto i : test_idx) test.rows.push_back(ds.rows[i]);
    const std::string note = " split fraction=" + shortest(train_fraction) + " seed=" + std::to_string(seed);
    train.provenance = ds.provenance + note + " part=train";
    test.provenance = ds.provenance + note + " part=test";
    return {std::move(train), std::move(test)};
}

inline std::string csv_header() {
    std::string h = "ev_id,day,label,attack";
    char buf[8];
    for (std::size_t t = 0; t < kSlotsPerDay; ++t) {
        std::snprintf(buf, sizeof buf, ",s%02zu", t);
        h += buf;
    }
    return h;
}

inline void write_csv(std::ostream& out, const LabeledDataset& ds) {
    out << csv_header() << '\n';
    for (const auto& r : ds.rows) {
        out << r.ev_id << ',' << r.day << ',' << to_string(r.label) << ',' << r.attack_id;
        for (double v : r.features) out << ',' << fixed(v);
        out << '\n';
    }
}

/// Reads the dataset CSV. Row numbers in errors are 1-based file lines.
inline LabeledDataset read_csv(std::istream& in) {
    LabeledDataset ds;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header()) throw ParseError(1, "bad header, expected " + csv_header());
    std::size_t line_no = 1;
    std::vector<std::string_view> f;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        f.clear();
        std::string_view rest(line);
        for (;;) {
            auto p = rest.find(',');
            f.push_back(rest.substr(0, p));
            if (p == std::string_view::npos) break;
            rest.remove_prefix(p + 1);
        }
        if (f.size() != 4 + kSlotsPerDay)
            throw ParseError(line_no, "expected " + std::to_string(4 + kSlotsPerDay) + " fields, got " +
                                          std::to_string(f.size()));
        LabeledRow r;
        r.ev_id = std::string(f[0]);
        if (r.ev_id.empty()) throw ParseError(line_no, "empty ev_id");
        if (!parse_int(f[1], r.day)) throw ParseError(line_no, "non-integer day");
        if (f[2] == "honest")
            r.label = Label::Honest;
        else if (f[2] == "lying")
            r.label = Label::Lying;
        else
            throw ParseError(line_no, "label must be honest or lying");
        if (!parse_int(f[3], r.attack_id) || r.attack_id < 0 || r.attack_id > 4)
            throw ParseError(line_no, "attack must be an integer in 0..4");
        for (std::size_t t = 0; t < kSlotsPerDay; ++t)
            if (!parse_double(f[4 + t], r.features[t])) throw ParseError(line_no, "non-numeric feature s" + std::to_string(t));
        try {
            validate_row(r);
        } catch (const ValidationError& e) {
            throw ValidationError("row " + std::to_string(line_no) + ": " + e.what());
        }
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

/// Writes `path` and, when the dataset carries provenance, `path + ".provenance"`.
inline void write_csv(const std::filesystem::path& path, const LabeledDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_csv(out, ds);
    if (!ds.provenance.empty()) {
        std::ofstream meta(path.string() + ".provenance", std::ios::binary);
        meta << ds.provenance << '\n';
    }
}

inline LabeledDataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    auto ds = read_csv(in);
    std::ifstream meta(path.string() + ".provenance");
    if (meta) std::getline(meta, ds.provenance);
    return ds;
}

/// Sample autocorrelation r_k = sum_{t<n-k} (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2, k = 0..max_lag.
inline std::vector<double> autocorrelation(const std::vector<double>& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    require(n > max_lag, "series must be longer than max_lag");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : series) c0 += (v - mean) * (v - mean);
    if (!(c0 > static_cast<double>(n) * 1e-24 * (1.0 + mean * mean))) throw ValidationError("autocorrelation of a zero-variance series");
    std::vector<double> acf(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += (series[t] - mean) * (series[t + k] - mean);
        acf[k] = s / c0;
    }
    return acf;
}

}  // namespace evguard
