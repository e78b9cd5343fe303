#pragma once

// Command-line front end. Every subcommand reads its settings from a flat
// RunConfig (defaults < --config file < --key value flags) and prints the
// resolved settings to the diagnostic stream before doing any work.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "evguard/adasyn.hpp"
#include "evguard/attacks.hpp"
#include "evguard/dataset.hpp"
#include "evguard/detector.hpp"
#include "evguard/eval.hpp"
#include "evguard/evolution.hpp"
#include "evguard/impact_sim.hpp"
#include "evguard/run_config.hpp"
#include "evguard/trace_ingest.hpp"

namespace evguard::cli {

namespace fs = std::filesystem;

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

namespace detail {

inline std::string or_default(const RunConfig& cfg, const std::string& key, const std::string& fallback) {
    const auto& v = cfg.str(key);
    return v.empty() ? fallback : v;
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

/// "12", "0,6,12" or "lo:hi[:step]" (inclusive).
inline std::vector<int> parse_int_list(const std::string& key, const std::string& s) {
    auto bad = [&] { return ValidationError("config key '" + key + "': bad list '" + s + "'"); };
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split_list(s, ':');
        if (parts.size() < 2 || parts.size() > 3) throw bad();
        int lo = 0, hi = 0, step = 1;
        if (!parse_int(parts[0], lo) || !parse_int(parts[1], hi) || (parts.size() == 3 && !parse_int(parts[2], step)))
            throw bad();
        if (step < 1 || hi < lo) throw bad();
        for (int v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    for (const auto& p : split_list(s, ',')) {
        int v = 0;
        if (!parse_int(p, v)) throw bad();
        out.push_back(v);
    }
    if (out.empty()) throw bad();
    return out;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const auto& p : split_list(s, ',')) {
        double v = 0;
        if (!parse_double(p, v)) throw ValidationError("config key '" + key + "': bad list '" + s + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("config key '" + key + "' is empty");
    return out;
}

/// Writes to `path`, or to `fallback` when `path` is empty.
inline void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    body(f);
    if (!f) throw Error("write failed for " + path);
}

inline HonestBuildConfig honest_config(const RunConfig& cfg) {
    HonestBuildConfig hc;
    hc.window.first_day_start = cfg.integer("start_epoch");
    hc.window.num_days = static_cast<int>(cfg.integer("days"));
    hc.max_speed_mph = cfg.real("max_speed");
    hc.initial_soc_low = cfg.real("initial_soc_low");
    hc.initial_soc_high = cfg.real("initial_soc_high");
    hc.policy.min_parked_minutes = static_cast<int>(cfg.integer("min_parked_minutes"));
    hc.policy.soc_start_threshold = cfg.real("charge_threshold");
    hc.seed = cfg.seed("dataset_seed");
    require(hc.initial_soc_low >= 0.0 && hc.initial_soc_low <= hc.initial_soc_high && hc.initial_soc_high <= 1.0,
            "initial SoC range must satisfy 0 <= low <= high <= 1");
    return hc;
}

inline AttackSampling attack_sampling(const RunConfig& cfg) {
    AttackSampling s;
    s.alpha_low = cfg.real("alpha_low");
    s.alpha_high = cfg.real("alpha_high");
    s.beta_low = cfg.real("beta_low");
    s.beta_high = cfg.real("beta_high");
    s.window_begin_min = static_cast<int>(cfg.integer("window_begin_min"));
    s.window_begin_max = static_cast<int>(cfg.integer("window_begin_max"));
    s.window_len_min = static_cast<int>(cfg.integer("window_len_min"));
    s.window_len_max = static_cast<int>(cfg.integer("window_len_max"));
    require(0.0 < s.alpha_low && s.alpha_low <= s.alpha_high && s.alpha_high < 1.0, "alpha range must lie in (0,1)");
    require(0.0 <= s.beta_low && s.beta_low <= s.beta_high && s.beta_high < 1.0, "beta range must lie in [0,1)");
    require(0 <= s.window_begin_min && s.window_begin_min <= s.window_begin_max &&
                s.window_begin_max < static_cast<int>(kSlotsPerDay),
            "window begin range must lie in 0..47");
    require(1 <= s.window_len_min && s.window_len_min <= s.window_len_max, "window length range is invalid");
    return s;
}

inline AdasynParams adasyn_params(const RunConfig& cfg) {
    AdasynParams p;
    p.k = static_cast<int>(cfg.integer("adasyn_k"));
    p.xi = cfg.real("adasyn_xi");
    p.ratio_threshold = cfg.real("adasyn_ratio_threshold");
    p.seed = cfg.seed("adasyn_seed");
    return p;
}

inline detector::TrainConfig train_config(const RunConfig& cfg) {
    detector::TrainConfig tc;
    if (!cfg.str("learning_rate").empty()) tc.learning_rate = cfg.real("learning_rate");
    tc.batch_size = static_cast<int>(cfg.integer("batch_size"));
    tc.epochs = static_cast<int>(cfg.integer("epochs"));
    tc.loss = detector::parse_loss(cfg.str("loss"));
    tc.dropout = cfg.real("dropout");
    tc.max_norm = cfg.real("max_norm");
    tc.init = detector::parse_init(cfg.str("init"));
    tc.optimizer = detector::parse_optimizer(cfg.str("optimizer"));
    tc.seed = cfg.seed("train_seed");
    tc.validate();
    return tc;
}

inline bool is_synthetic(const LabeledRow& r) { return r.ev_id.rfind("adasyn", 0) == 0; }

/// Holds out a stratified validation slice of the real rows; ADASYN rows
/// always stay in the fitting part.
inline std::pair<LabeledDataset, LabeledDataset> holdout(const LabeledDataset& ds, const RunConfig& cfg) {
    const double vf = cfg.real("valid_fraction");
    require(vf > 0.0 && vf < 1.0, "valid_fraction must be in (0,1)");
    LabeledDataset real, synthetic;
    for (const auto& r : ds.rows) (is_synthetic(r) ? synthetic : real).rows.push_back(r);
    require(real.count(Label::Honest) > 0 && real.count(Label::Lying) > 0, "training file needs both classes");
    auto [fit, valid] = split(real, 1.0 - vf, derive_seed(cfg.seed("split_seed"), {0x76616c6964ULL}));
    fit.rows.insert(fit.rows.end(), synthetic.rows.begin(), synthetic.rows.end());
    require(!valid.rows.empty(), "validation slice is empty; raise valid_fraction");
    if (cfg.flag("balance_train")) fit = balance_dataset(fit, adasyn_params(cfg)).first;
    return {std::move(fit), std::move(valid)};
}

inline std::vector<fs::path> trace_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("traces directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .txt trace files in " + dir.string());
    return files;
}

inline VehicleTrace read_trace_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open " + p.string());
    try {
        return parse_trace(in, p.stem().string());
    } catch (const ParseError& e) {
        throw Error(p.string() + ": " + e.what());
    }
}

}  // namespace detail

// ---- subcommands ---------------------------------------------------------

inline void cmd_gen_traces(const RunConfig& cfg, Streams io) {
    const int evs = static_cast<int>(cfg.integer("evs"));
    const int days = static_cast<int>(cfg.integer("days"));
    require(evs >= 1, "evs must be >= 1");
    MobilityParams mob;
    mob.start_epoch = cfg.integer("start_epoch");
    const fs::path dir = cfg.str("out_dir");
    fs::create_directories(dir);
    const auto seed = cfg.seed("trace_seed");
    for (int i = 0; i < evs; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "ev%03d", i);
        const auto trace =
            generate_synthetic_trace(derive_seed(seed, {0x747263ULL, static_cast<std::uint64_t>(i)}), days, mob, id);
        detail::emit((dir / (std::string(id) + ".txt")).string(), io.out, [&](std::ostream& o) { write_trace(o, trace); });
    }
    io.err << "wrote " << evs << " traces to " << dir.string() << '\n';
}

inline void cmd_ingest(const RunConfig& cfg, Streams io) {
    const auto in = cfg.str("in");
    require(!in.empty(), "ingest needs --in <trace file>");
    const auto trace = detail::read_trace_file(in);
    const auto day_start = cfg.integer("start_epoch") + 86400LL * cfg.integer("day");
    const auto minutes = minutize(trace, day_start, cfg.real("max_speed"));
    detail::emit(cfg.str("out"), io.out, [&](std::ostream& o) {
        o << "minute,distance,parked\n";
        for (const auto& m : minutes) o << m.minute_index << ',' << fixed(m.distance) << ',' << (m.parked ? 1 : 0) << '\n';
    });
}

inline void cmd_build_dataset(const RunConfig& cfg, Streams io) {
    const auto hc = detail::honest_config(cfg);
    LabeledDataset honest;
    if (cfg.str("traces_dir").empty()) {
        honest = build_honest_synthetic(static_cast<int>(cfg.integer("evs")), hc);
    } else {
        std::vector<VehicleTrace> traces;
        for (const auto& p : detail::trace_files(cfg.str("traces_dir"))) traces.push_back(detail::read_trace_file(p));
        honest = build_honest(traces, hc);
    }
    const auto malicious = build_malicious(honest, cfg.seed("attack_seed"), detail::attack_sampling(cfg));
    const auto all = concat(honest, malicious);
    const auto out = detail::or_default(cfg, "out", "dataset.csv");
    write_csv(fs::path(out), all);
    io.err << "honest=" << honest.size() << " malicious=" << malicious.size() << " -> " << out << '\n';
}

inline void cmd_balance(const RunConfig& cfg, Streams io) {
    const auto in = detail::or_default(cfg, "in", "train.csv");
    const auto ds = read_csv(fs::path(in));
    const auto [balanced, rep] = balance_dataset(ds, detail::adasyn_params(cfg));
    const auto out = detail::or_default(cfg, "out", "train_balanced.csv");
    write_csv(fs::path(out), balanced);
    io.err << "ratio=" << fixed(rep.ratio) << " generated=" << rep.synthetic.size()
           << " honest=" << balanced.count(Label::Honest) << " lying=" << balanced.count(Label::Lying) << " -> " << out
           << '\n';
}

inline void cmd_split(const RunConfig& cfg, Streams io) {
    const auto in = detail::or_default(cfg, "in", "dataset.csv");
    const auto ds = read_csv(fs::path(in));
    const auto [train, test] = split(ds, cfg.real("train_fraction"), cfg.seed("split_seed"));
    write_csv(fs::path(cfg.str("train_out")), train);
    write_csv(fs::path(cfg.str("test_out")), test);
    io.err << "train=" << train.size() << " test=" << test.size() << '\n';
}

inline detector::Architecture architecture(const RunConfig& cfg) {
    detector::Architecture a;
    a.kind = detector::parse_model_kind(cfg.str("model"));
    a.layers = static_cast<int>(cfg.integer("layers"));
    a.neurons = static_cast<int>(cfg.integer("neurons"));
    a.hidden_activation = detector::parse_activation(cfg.str("activation"));
    a.validate();
    return a;
}

inline void cmd_train(const RunConfig& cfg, Streams io) {
    const auto in = detail::or_default(cfg, "in", "train_balanced.csv");
    const auto ds = read_csv(fs::path(in));
    const auto [fit, valid] = detail::holdout(ds, cfg);
    const auto arch = architecture(cfg);
    const auto tc = detail::train_config(cfg);
    const auto result = detector::train(arch, detector::to_examples(fit), detector::to_examples(valid), tc,
                                        [&](const detector::EpochStats& s) {
                                            io.err << "epoch " << s.epoch << " loss=" << fixed(s.train_loss)
                                                   << " valid_dr=" << fixed(s.valid_dr) << " valid_fa="
                                                   << fixed(s.valid_fa) << " valid_hd=" << fixed(s.valid_hd) << '\n';
                                        });
    detector::save_model(fs::path(cfg.str("model_out")), result.model);
    if (!cfg.str("history_out").empty())
        detail::emit(cfg.str("history_out"), io.out, [&](std::ostream& o) {
            o << "epoch,train_loss,valid_dr,valid_fa,valid_acc,valid_hd\n";
            for (const auto& s : result.history)
                o << s.epoch << ',' << fixed(s.train_loss) << ',' << fixed(s.valid_dr) << ',' << fixed(s.valid_fa)
                  << ',' << fixed(s.valid_acc) << ',' << fixed(s.valid_hd) << '\n';
        });
    io.err << "best epoch " << result.best_epoch << " -> " << cfg.str("model_out") << '\n';
}

inline void cmd_evaluate(const RunConfig& cfg, Streams io) {
    const auto model = detector::load_model(fs::path(cfg.str("model_in")));
    const auto test = read_csv(fs::path(detail::or_default(cfg, "in", "test.csv")));
    const auto ex = detector::to_examples(test);
    const auto m = detector::evaluate(model, ex);
    const auto name = detail::or_default(cfg, "name", std::string(detector::to_string(detector::kind_of(model))));
    detail::emit(cfg.str("metrics_out"), io.out, [&](std::ostream& o) {
        o << kMetricsCsvHeader << '\n';
        write_metrics_row(o, name, m);
    });
    if (!cfg.str("roc_out").empty()) {
        const auto p = detector::class_probabilities(model, ex.x);
        std::vector<double> scores(ex.size());
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = p(detector::kLyingIndex, static_cast<Eigen::Index>(i));
        detail::emit(cfg.str("roc_out"), io.out, [&](std::ostream& o) { write_roc_csv(o, roc_auc(scores, ex.y)); });
    }
}

inline void cmd_tune(const RunConfig& cfg, Streams io) {
    const auto ds = read_csv(fs::path(detail::or_default(cfg, "in", "train_balanced.csv")));
    const auto [fit, valid] = detail::holdout(ds, cfg);
    auto tc = detail::train_config(cfg);
    tc.epochs = static_cast<int>(cfg.integer("tune_epochs"));
    tc.validate();
    GaConfig ga;
    ga.population_size = static_cast<int>(cfg.integer("population"));
    ga.generations = static_cast<int>(cfg.integer("generations"));
    ga.crossover_rate = cfg.real("crossover_rate");
    ga.mutation_rate = cfg.real("mutation_rate");
    ga.elite_count = static_cast<int>(cfg.integer("elite_count"));
    ga.seed = cfg.seed("ga_seed");
    const SearchSpace space;
    const auto kind = detector::parse_model_kind(cfg.str("model"));
    const auto base = make_detector_fitness(detector::to_examples(fit), detector::to_examples(valid), tc, kind, space);
    std::size_t calls = 0;
    const FitnessFn fitness = [&](const Chromosome& c) {
        const auto o = base(c);
        io.err << "evaluated #" << ++calls << " dr=" << fixed(o.dr) << " fa=" << fixed(o.fa) << '\n';
        return o;
    };
    const auto result = evolve(ga, space, fitness);
    detail::emit(cfg.str("archive_out"), io.out,
                 [&](std::ostream& o) { write_archive_csv(o, result.archive, space); });
    io.err << "archive size " << result.archive.size() << " after " << result.evaluations << " evaluations\n";
}

inline void cmd_simulate_impact(const RunConfig& cfg, Streams io) {
    const auto liars = detail::parse_int_list("liars", cfg.str("liars"));
    const auto betas = detail::parse_double_list("beta", cfg.str("beta"));
    const auto capacities = detail::parse_double_list("capacity", cfg.str("capacity"));
    ImpactConfig base;
    base.n_evs = static_cast<int>(cfg.integer("fleet"));
    base.n_slots = static_cast<int>(cfg.integer("slots"));
    base.initial_soc = cfg.real("impact_initial_soc");
    base.initial_tcc = static_cast<int>(cfg.integer("tcc"));
    base.battery_units = cfg.real("battery_units");
    base.epsilon = cfg.real("epsilon");
    base.seed = cfg.seed("impact_seed");
    std::vector<ImpactConfig> runs;
    for (double cap : capacities)
        for (double b : betas)
            for (int n : liars) {
                ImpactConfig c = base;
                c.capacity = cap;
                c.beta = b;
                c.n_liars = n;
                c.validate();
                runs.push_back(c);
            }
    detail::emit(cfg.str("out"), io.out, [&](std::ostream& o) {
        o << kImpactCsvHeader << '\n';
        for (const auto& c : runs) write_impact_row(o, c, run_impact(c));
    });
}

namespace detail {

inline std::vector<std::vector<std::string>> read_simple_csv(const std::string& path, const std::string& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw Error(path + ": schema mismatch, expected header '" + header + "'");
    const auto width = split_list(header, ',').size();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        std::istringstream ss(line);
        while (std::getline(ss, cur, ',')) f.push_back(cur);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != width) throw Error(path + ": line " + std::to_string(n) + ": expected " + std::to_string(width) + " fields");
        rows.push_back(std::move(f));
    }
    return rows;
}

}  // namespace detail

inline constexpr const char* kReportCsvHeader =
    "source,name,n_liars,beta,capacity,p_honest,p_liar,avg_unused,acc,tpr,fpr,dr,fa,hd,auc";

inline void cmd_report(const RunConfig& cfg, Streams io) {
    const auto impact_path = cfg.str("impact_in");
    const auto metrics_path = cfg.str("metrics_in");
    require(!impact_path.empty() || !metrics_path.empty(), "report needs --impact_in and/or --metrics_in");
    std::vector<std::vector<std::string>> impact, metrics;
    if (!impact_path.empty()) impact = detail::read_simple_csv(impact_path, kImpactCsvHeader);
    if (!metrics_path.empty()) metrics = detail::read_simple_csv(metrics_path, kMetricsCsvHeader);
    detail::emit(cfg.str("out"), io.out, [&](std::ostream& o) {
        o << kReportCsvHeader << '\n';
        for (const auto& r : impact)
            o << "impact,," << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << ',' << r[4] << ',' << r[5]
              << ",NA,NA,NA,NA,NA,NA,NA\n";
        for (const auto& r : metrics) {
            o << "detector," << r[0] << ",NA,NA,NA,NA,NA,NA";
            for (std::size_t i = 1; i < r.size(); ++i) o << ',' << r[i];
            o << '\n';
        }
    });
}

// ---- dispatch ------------------------------------------------------------

struct Subcommand {
    const char* name;
    const char* description;
    std::vector<std::string> keys;  // printed as the resolved config
    void (*run)(const RunConfig&, Streams);
};

inline const std::vector<Subcommand>& subcommands() {
    static const std::vector<Subcommand> subs = {
        {"gen-traces", "write synthetic GPS traces, one file per vehicle",
         {"evs", "days", "start_epoch", "trace_seed", "out_dir"}, cmd_gen_traces},
        {"ingest", "resample one trace day to per-minute distances",
         {"in", "day", "start_epoch", "max_speed", "out"}, cmd_ingest},
        {"build-dataset", "build honest and attacked SoC rows",
         {"traces_dir", "evs", "days", "start_epoch", "max_speed", "initial_soc_low", "initial_soc_high",
          "min_parked_minutes", "charge_threshold", "dataset_seed", "attack_seed", "alpha_low", "alpha_high",
          "beta_low", "beta_high", "window_begin_min", "window_begin_max", "window_len_min", "window_len_max", "out"},
         cmd_build_dataset},
        {"balance", "ADASYN-oversample the honest class",
         {"in", "out", "adasyn_k", "adasyn_xi", "adasyn_ratio_threshold", "adasyn_seed"}, cmd_balance},
        {"split", "stratified train/test split",
         {"in", "train_fraction", "split_seed", "train_out", "test_out"}, cmd_split},
        {"train", "train an MLP or GRU detector",
         {"in", "valid_fraction", "split_seed", "balance_train", "adasyn_k", "adasyn_xi", "adasyn_ratio_threshold",
          "adasyn_seed", "model", "layers", "neurons", "activation", "optimizer", "init", "dropout", "max_norm",
          "learning_rate", "batch_size", "epochs", "loss", "train_seed", "model_out", "history_out"},
         cmd_train},
        {"evaluate", "score a checkpoint on a labeled CSV",
         {"model_in", "in", "name", "metrics_out", "roc_out"}, cmd_evaluate},
        {"tune", "NSGA-II hyperparameter search",
         {"in", "valid_fraction", "split_seed", "balance_train", "model", "population", "generations",
          "crossover_rate", "mutation_rate", "elite_count", "ga_seed", "tune_epochs", "learning_rate", "batch_size",
          "loss", "train_seed", "archive_out"},
         cmd_tune},
        {"simulate-impact", "charging coordinator under lying EVs",
         {"liars", "beta", "capacity", "fleet", "slots", "impact_initial_soc", "tcc", "battery_units", "epsilon",
          "impact_seed", "out"},
         cmd_simulate_impact},
        {"report", "join impact and detector metrics into one CSV", {"impact_in", "metrics_in", "out"}, cmd_report},
    };
    return subs;
}

/// Runs one subcommand; `args` excludes the program name. Returns the exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"evguard: EV charging misreport simulation and detection toolkit", "evguard"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::map<std::string, std::string> given;
    std::vector<std::pair<CLI::App*, std::vector<std::pair<std::string, CLI::Option*>>>> registered;
    for (const auto& sc : subcommands()) {
        auto* sub = app.add_subcommand(sc.name, sc.description);
        sub->add_option("--config", config_path, "flat key=value configuration file");
        std::vector<std::pair<std::string, CLI::Option*>> opts;
        for (const auto& key : config_schema()) {
            std::string names = std::string("--") + key.name;
            std::string dashed = key.name;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            if (dashed != key.name) names += ",--" + dashed;
            std::string help = key.help;
            if (*key.default_value) help += std::string(" [") + key.default_value + "]";
            opts.emplace_back(key.name, sub->add_option(names, given[key.name], help));
        }
        registered.emplace_back(sub, std::move(opts));
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    for (std::size_t i = 0; i < registered.size(); ++i) {
        auto* sub = registered[i].first;
        if (!sub->parsed()) continue;
        const auto& sc = subcommands()[i];
        try {
            RunConfig cfg;
            if (!config_path.empty()) cfg.load(fs::path(config_path));
            for (const auto& [key, opt] : registered[i].second)
                if (opt->count() > 0) cfg.set(key, given[key]);
            err << "# evguard " << sc.name << '\n';
            cfg.print(err, sc.keys);
            sc.run(cfg, Streams{out, err});
            return 0;
        } catch (const std::exception& e) {
            err << "evguard " << sc.name << ": error: " << e.what() << '\n';
            return 1;
        }
    }
    return 1;
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace evguard::cli
