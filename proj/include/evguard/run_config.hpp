#pragma once

// Flat key=value run configuration. Every key has a recorded default; seeds
// for individual stages fall back to `seed` when left empty.

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "evguard/core.hpp"

namespace evguard {

struct ConfigKey {
    const char* name;
    const char* default_value;
    const char* help;
};

// clang-format off
inline const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> keys = {
        {"seed", "42", "master seed; stage seeds default to it"},
        {"trace_seed", "", "seed for synthetic traces"},
        {"dataset_seed", "", "seed for initial SoC draws"},
        {"attack_seed", "", "seed for attack sampling"},
        {"split_seed", "", "seed for train/test and train/valid splits"},
        {"adasyn_seed", "", "seed for ADASYN interpolation"},
        {"train_seed", "", "seed for weight init, shuffling and dropout"},
        {"ga_seed", "", "seed for the NSGA-II search"},
        {"impact_seed", "", "seed for coordinator tie shuffles"},

        {"in", "", "input file"},
        {"out", "", "output file (stdout for CSV-producing commands when empty)"},
        {"out_dir", "traces", "output directory for gen-traces"},
        {"traces_dir", "", "directory of trace files for build-dataset (synthetic fleet when empty)"},

        {"evs", "64", "fleet size for trace generation and dataset building"},
        {"days", "24", "days per vehicle"},
        {"start_epoch", "1210982400", "UTC epoch seconds of the first day"},
        {"day", "0", "day index for ingest"},
        {"max_speed", "80", "mph cap applied when resampling traces"},
        {"initial_soc_low", "0.3", "lower bound of the daily initial SoC draw"},
        {"initial_soc_high", "1.0", "upper bound of the daily initial SoC draw"},
        {"min_parked_minutes", "30", "parked minutes before charging starts"},
        {"charge_threshold", "0.9", "charging starts only below this SoC"},

        {"alpha_low", "0.1", "A1 factor range low"},
        {"alpha_high", "0.8", "A1 factor range high"},
        {"beta_low", "0.1", "A2 factor range low"},
        {"beta_high", "0.8", "A2 factor range high"},
        {"window_begin_min", "4", "A3/A4 earliest window start slot"},
        {"window_begin_max", "30", "A3/A4 latest window start slot"},
        {"window_len_min", "8", "A3/A4 shortest window"},
        {"window_len_max", "20", "A3/A4 longest window"},

        {"adasyn_k", "5", "ADASYN neighbours"},
        {"adasyn_xi", "1.0", "ADASYN balance level"},
        {"adasyn_ratio_threshold", "0.75", "ADASYN runs below this class ratio"},

        {"train_fraction", "0.7", "train share for split"},
        {"train_out", "train.csv", "split: training part"},
        {"test_out", "test.csv", "split: test part"},

        {"valid_fraction", "0.2", "share of the training file held out for validation"},
        {"balance_train", "false", "ADASYN-balance the fitting part before training"},
        {"model", "gru", "mlp or gru"},
        {"layers", "2", "hidden layers"},
        {"neurons", "128", "units per hidden layer"},
        {"activation", "softsign", "hidden activation: sigmoid, tanh, relu, softsign"},
        {"optimizer", "adam", "sgd, momentum or adam"},
        {"init", "glorot", "uniform, normal or glorot"},
        {"dropout", "0", "dropout rate"},
        {"max_norm", "3", "per-neuron incoming weight norm cap"},
        {"learning_rate", "", "step size (per-optimizer default when empty)"},
        {"batch_size", "32", "mini-batch size"},
        {"epochs", "20", "training epochs"},
        {"loss", "cross_entropy", "cross_entropy or mean_squared_error"},
        {"model_out", "model.txt", "trained model checkpoint"},
        {"history_out", "", "per-epoch training history CSV"},

        {"model_in", "model.txt", "checkpoint to evaluate"},
        {"name", "", "model label in the metrics CSV (model kind when empty)"},
        {"metrics_out", "", "metrics CSV (stdout when empty)"},
        {"roc_out", "", "ROC curve CSV"},

        {"population", "12", "NSGA-II population size"},
        {"generations", "8", "NSGA-II generations"},
        {"crossover_rate", "0.9", "single-point crossover probability"},
        {"mutation_rate", "0.1", "per-gene mutation probability"},
        {"elite_count", "1", "parents kept unconditionally"},
        {"tune_epochs", "15", "training epochs per fitness evaluation"},
        {"archive_out", "", "Pareto archive CSV (stdout when empty)"},

        {"liars", "0", "liar count, list a,b,c or range lo:hi[:step]"},
        {"beta", "0.2", "reporting factor of liars, or a comma list"},
        {"capacity", "2160", "energy units per slot, or a comma list"},
        {"fleet", "100", "EVs in the impact simulation"},
        {"slots", "30", "simulated slots"},
        {"impact_initial_soc", "0.5", "SoC of fresh EVs"},
        {"tcc", "4", "slots to complete charge of fresh EVs"},
        {"battery_units", "200", "energy units of a full battery"},
        {"epsilon", "0.5", "priority weight of the SoC term"},

        {"impact_in", "", "impact CSV for report"},
        {"metrics_in", "", "metrics CSV for report"},
    };
    return keys;
}
// clang-format on

class RunConfig {
public:
    RunConfig() {
        for (const auto& k : config_schema()) values_[k.name] = k.default_value;
    }

    static bool known(const std::string& key) {
        for (const auto& k : config_schema())
            if (key == k.name) return true;
        return false;
    }

    void set(const std::string& key, const std::string& value) {
        if (!known(key)) throw ValidationError("unknown config key '" + key + "'");
        values_[key] = value;
    }

    /// Reads `key=value` lines; '#' starts a comment.
    void load(std::istream& in) {
        std::string line;
        for (std::size_t n = 1; std::getline(in, line); ++n) {
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            const auto text = trim(line);
            if (text.empty()) continue;
            const auto eq = text.find('=');
            if (eq == std::string::npos) throw ParseError(n, "expected key=value");
            const auto key = trim(text.substr(0, eq));
            if (!known(key)) throw ParseError(n, "unknown config key '" + key + "'");
            values_[key] = trim(text.substr(eq + 1));
        }
    }

    void load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open config file " + path.string());
        try {
            load(in);
        } catch (const ParseError& e) {
            throw Error(path.string() + ": " + e.what());
        }
    }

    const std::string& str(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
        return it->second;
    }

    long integer(const std::string& key) const {
        long v = 0;
        if (!parse_int(str(key), v)) throw ValidationError("config key '" + key + "': not an integer: '" + str(key) + "'");
        return v;
    }

    std::uint64_t u64(const std::string& key) const {
        std::uint64_t v = 0;
        if (!parse_int(str(key), v)) throw ValidationError("config key '" + key + "': not a seed: '" + str(key) + "'");
        return v;
    }

    double real(const std::string& key) const {
        double v = 0;
        if (!parse_double(str(key), v)) throw ValidationError("config key '" + key + "': not a number: '" + str(key) + "'");
        return v;
    }

    bool flag(const std::string& key) const {
        const auto& v = str(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ValidationError("config key '" + key + "': not a boolean: '" + v + "'");
    }

    /// Stage seed: the key's own value, or `seed` when empty.
    std::uint64_t seed(const std::string& key) const { return str(key).empty() ? u64("seed") : u64(key); }

    /// Value as printed in the resolved config (seeds resolved).
    std::string resolved(const std::string& key) const {
        if (key.size() > 5 && key.ends_with("_seed")) return std::to_string(seed(key));
        return str(key);
    }

    void print(std::ostream& out, const std::vector<std::string>& keys) const {
        for (const auto& k : keys) out << k << '=' << resolved(k) << '\n';
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace evguard
