#pragma once

// NSGA-II search over detector hyperparameters with objectives
// (maximise DR, minimise FA).

#include <algorithm>
#include <array>
#include <compare>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "evguard/core.hpp"
#include "evguard/detector.hpp"
#include "evguard/rng.hpp"

namespace evguard {

struct Objectives {
    double dr = 0.0;  // maximise
    double fa = 1.0;  // minimise

    friend bool operator==(const Objectives&, const Objectives&) = default;
};

inline bool dominates(const Objectives& a, const Objectives& b) {
    return a.dr >= b.dr && a.fa <= b.fa && (a.dr > b.dr || a.fa < b.fa);
}

/// Fronts as index lists (ascending within a front); front 0 is non-dominated.
inline std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<Objectives>& pts) {
    require(!pts.empty(), "non_dominated_sort needs at least one point");
    const std::size_t n = pts.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pts[p], pts[q])) dominated[p].push_back(q);
            else if (dominates(pts[q], pts[p])) ++count[p];
        }
        if (count[p] == 0) fronts[0].push_back(p);
    }
    for (std::size_t k = 0; !fronts[k].empty(); ++k) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[k])
            for (std::size_t q : dominated[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

/// Boundary points per objective get +inf; interior points sum the
/// neighbour gap normalised by the objective's range (zero range adds 0).
inline std::vector<double> crowding_distance(const std::vector<Objectives>& front) {
    require(!front.empty(), "crowding_distance needs at least one point");
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);
    for (int m = 0; m < 2; ++m) {
        auto val = [&](std::size_t i) { return m == 0 ? front[i].dr : front[i].fa; };
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val(a) < val(b); });
        d[idx.front()] = inf;
        d[idx.back()] = inf;
        const double range = val(idx.back()) - val(idx.front());
        if (range <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) d[idx[k]] += (val(idx[k + 1]) - val(idx[k - 1])) / range;
    }
    return d;
}

/// Categorical gene domains, in chromosome order:
/// L, N, O, H, D, J, A_hd, A_op.
struct SearchSpace {
    std::vector<int> layers{1, 2, 3, 4, 5, 6};
    std::vector<int> neurons{32, 64, 128, 256, 512, 768};
    std::vector<detector::Optimizer> optimizers{detector::Optimizer::Sgd, detector::Optimizer::Momentum,
                                                detector::Optimizer::Adam};
    std::vector<detector::Init> inits{detector::Init::Uniform, detector::Init::Normal, detector::Init::Glorot};
    std::vector<double> dropouts{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<int> max_norms{1, 2, 3, 4, 5};
    std::vector<detector::Activation> activations{detector::Activation::Sigmoid, detector::Activation::Tanh,
                                                  detector::Activation::Relu, detector::Activation::Softsign};
    std::vector<std::string> output_activations{"softmax"};

    static constexpr std::size_t kGenes = 8;

    std::array<std::size_t, kGenes> sizes() const {
        return {layers.size(), neurons.size(),  optimizers.size(),  inits.size(),
                dropouts.size(), max_norms.size(), activations.size(), output_activations.size()};
    }

    void validate() const {
        for (auto s : sizes())
            if (s == 0) throw ValidationError("search space has an empty gene domain");
        for (int l : layers) require(l >= 1, "layers must be >= 1");
        for (int n : neurons) require(n >= 1, "neurons must be >= 1");
        for (double d : dropouts) require(d >= 0.0 && d <= 0.9, "dropout must be in [0,0.9]");
        for (int j : max_norms) require(j > 0, "max_norm must be > 0");
    }
};

/// One configuration, stored as an index into each gene's domain.
struct Chromosome {
    std::array<int, SearchSpace::kGenes> genes{};

    auto operator<=>(const Chromosome&) const = default;
};

struct Hyperparameters {
    detector::Architecture arch;
    detector::Optimizer optimizer = detector::Optimizer::Adam;
    detector::Init init = detector::Init::Glorot;
    double dropout = 0.0;
    double max_norm = 3.0;
};

inline void check_chromosome(const Chromosome& c, const SearchSpace& space) {
    const auto sz = space.sizes();
    for (std::size_t g = 0; g < SearchSpace::kGenes; ++g)
        if (c.genes[g] < 0 || static_cast<std::size_t>(c.genes[g]) >= sz[g])
            throw ValidationError("gene " + std::to_string(g) + " out of domain");
}

inline Hyperparameters decode(const Chromosome& c, const SearchSpace& space, detector::ModelKind kind) {
    check_chromosome(c, space);
    auto at = [&](const auto& v, std::size_t g) { return v[static_cast<std::size_t>(c.genes[g])]; };
    Hyperparameters h;
    h.arch.kind = kind;
    h.arch.layers = at(space.layers, 0);
    h.arch.neurons = at(space.neurons, 1);
    h.optimizer = at(space.optimizers, 2);
    h.init = at(space.inits, 3);
    h.dropout = at(space.dropouts, 4);
    h.max_norm = at(space.max_norms, 5);
    h.arch.hidden_activation = at(space.activations, 6);
    return h;
}

struct GaConfig {
    int population_size = 12;
    int generations = 8;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    int elite_count = 1;
    std::uint64_t seed = 42;

    void validate() const {
        require(population_size >= 2, "population_size must be >= 2");
        require(generations >= 0, "generations must be >= 0");
        require(crossover_rate >= 0.0 && crossover_rate <= 1.0, "crossover_rate must be in [0,1]");
        require(mutation_rate >= 0.0 && mutation_rate <= 1.0, "mutation_rate must be in [0,1]");
        require(elite_count >= 0 && elite_count <= population_size, "elite_count must be in [0, population_size]");
    }
};

struct ArchiveEntry {
    Chromosome chromosome;
    Objectives objectives;
};

struct EvolutionResult {
    std::vector<ArchiveEntry> archive;                  // final non-dominated set
    std::vector<std::vector<ArchiveEntry>> archives;    // archive after initialisation and each generation
    std::vector<std::vector<Chromosome>> populations;   // population after initialisation and each generation
    std::size_t evaluations = 0;                        // distinct fitness calls
};

using FitnessFn = std::function<Objectives(const Chromosome&)>;

namespace detail {

struct Ranked {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

inline Ranked rank_population(const std::vector<Objectives>& obj) {
    Ranked r;
    r.rank.assign(obj.size(), 0);
    r.crowding.assign(obj.size(), 0.0);
    const auto fronts = non_dominated_sort(obj);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        std::vector<Objectives> f;
        for (auto i : fronts[k]) f.push_back(obj[i]);
        const auto cd = crowding_distance(f);
        for (std::size_t j = 0; j < fronts[k].size(); ++j) {
            r.rank[fronts[k][j]] = k;
            r.crowding[fronts[k][j]] = cd[j];
        }
    }
    return r;
}

/// True when i is preferred over j: lower front, then larger crowding distance.
inline bool better(const Ranked& r, std::size_t i, std::size_t j) {
    if (r.rank[i] != r.rank[j]) return r.rank[i] < r.rank[j];
    return r.crowding[i] > r.crowding[j];
}

/// Indices sorted best-first (stable for exact ties).
inline std::vector<std::size_t> order_by_preference(const Ranked& r) {
    std::vector<std::size_t> idx(r.rank.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return better(r, a, b); });
    return idx;
}

inline std::vector<ArchiveEntry> non_dominated(const std::map<Chromosome, Objectives>& seen) {
    std::vector<ArchiveEntry> out;
    for (const auto& [c, o] : seen) {
        bool dominated = false;
        for (const auto& [c2, o2] : seen)
            if (dominates(o2, o)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back({c, o});
    }
    return out;
}

}  // namespace detail

/// Generational NSGA-II with memoised fitness. The returned archive is the
/// non-dominated set of every chromosome evaluated so far, so it can only
/// improve from one generation to the next.
inline EvolutionResult evolve(const GaConfig& cfg, const SearchSpace& space, const FitnessFn& fitness) {
    cfg.validate();
    space.validate();
    require(static_cast<bool>(fitness), "fitness function is empty");
    const auto sizes = space.sizes();
    const auto n = static_cast<std::size_t>(cfg.population_size);
    Rng rng(cfg.seed);

    std::map<Chromosome, Objectives> memo;
    EvolutionResult result;
    auto evaluate = [&](const Chromosome& c) {
        if (auto it = memo.find(c); it != memo.end()) return it->second;
        const Objectives o = fitness(c);
        if (!(o.dr >= 0.0 && o.dr <= 1.0 && o.fa >= 0.0 && o.fa <= 1.0))
            throw ValidationError("fitness returned objectives outside [0,1]");
        memo.emplace(c, o);
        ++result.evaluations;
        return o;
    };
    auto random_chromosome = [&] {
        Chromosome c;
        for (std::size_t g = 0; g < SearchSpace::kGenes; ++g) c.genes[g] = static_cast<int>(rng.index(sizes[g]));
        return c;
    };

    std::vector<Chromosome> pop;
    std::vector<Objectives> obj;
    for (std::size_t i = 0; i < n; ++i) {
        pop.push_back(random_chromosome());
        obj.push_back(evaluate(pop.back()));
    }
    result.populations.push_back(pop);
    result.archives.push_back(detail::non_dominated(memo));

    for (int gen = 0; gen < cfg.generations; ++gen) {
        const auto ranked = detail::rank_population(obj);
        auto tournament = [&] {
            const std::size_t a = rng.index(n);
            const std::size_t b = rng.index(n);
            return detail::better(ranked, b, a) ? b : a;
        };

        std::vector<Chromosome> offspring;
        while (offspring.size() < n) {
            Chromosome c1 = pop[tournament()];
            Chromosome c2 = pop[tournament()];
            if (rng.bernoulli(cfg.crossover_rate)) {
                const std::size_t cut = 1 + rng.index(SearchSpace::kGenes - 1);
                for (std::size_t g = cut; g < SearchSpace::kGenes; ++g) std::swap(c1.genes[g], c2.genes[g]);
            }
            for (Chromosome* c : {&c1, &c2}) {
                for (std::size_t g = 0; g < SearchSpace::kGenes; ++g)
                    if (rng.bernoulli(cfg.mutation_rate)) c->genes[g] = static_cast<int>(rng.index(sizes[g]));
                if (offspring.size() < n) offspring.push_back(*c);
            }
        }
        std::vector<Objectives> off_obj;
        for (const auto& c : offspring) off_obj.push_back(evaluate(c));

        // Merge parents and offspring, dropping repeated chromosomes.
        std::vector<Chromosome> merged;
        std::vector<Objectives> merged_obj;
        std::map<Chromosome, bool> present;
        auto add = [&](const Chromosome& c, const Objectives& o) {
            if (present.emplace(c, true).second) {
                merged.push_back(c);
                merged_obj.push_back(o);
            }
        };
        for (std::size_t i = 0; i < n; ++i) add(pop[i], obj[i]);
        for (std::size_t i = 0; i < n; ++i) add(offspring[i], off_obj[i]);

        std::vector<Chromosome> next;
        std::vector<Objectives> next_obj;
        std::vector<bool> taken(merged.size(), false);
        // Elites: the best parents survive unconditionally.
        const auto parent_order = detail::order_by_preference(ranked);
        for (std::size_t e = 0; e < static_cast<std::size_t>(cfg.elite_count); ++e) {
            const auto i = parent_order[e];
            for (std::size_t m = 0; m < merged.size(); ++m)
                if (!taken[m] && merged[m] == pop[i]) {
                    taken[m] = true;
                    next.push_back(merged[m]);
                    next_obj.push_back(merged_obj[m]);
                }
        }
        // Fill by fronts, breaking the split front by crowding distance.
        const auto fronts = non_dominated_sort(merged_obj);
        for (const auto& front : fronts) {
            if (next.size() >= n) break;
            std::vector<Objectives> f;
            for (auto i : front) f.push_back(merged_obj[i]);
            const auto cd = crowding_distance(f);
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            for (auto k : order) {
                if (next.size() >= n) break;
                const auto m = front[k];
                if (taken[m]) continue;
                taken[m] = true;
                next.push_back(merged[m]);
                next_obj.push_back(merged_obj[m]);
            }
        }
        // Too few distinct chromosomes: top up with repeats of the best.
        for (std::size_t k = 0; next.size() < n; ++k) {
            next.push_back(next[k]);
            next_obj.push_back(next_obj[k]);
        }
        pop = std::move(next);
        obj = std::move(next_obj);
        result.populations.push_back(pop);
        result.archives.push_back(detail::non_dominated(memo));
    }
    result.archive = result.archives.back();
    return result;
}

inline constexpr const char* kArchiveCsvHeader =
    "layers,neurons,optimizer,init,dropout,max_norm,hidden_activation,output_activation,dr,fa";

inline void write_archive_csv(std::ostream& out, const std::vector<ArchiveEntry>& archive, const SearchSpace& space) {
    out << kArchiveCsvHeader << '\n';
    for (const auto& e : archive) {
        const auto h = decode(e.chromosome, space, detector::ModelKind::Gru);
        out << h.arch.layers << ',' << h.arch.neurons << ',' << detector::to_string(h.optimizer) << ','
            << detector::to_string(h.init) << ',' << shortest(h.dropout) << ',' << shortest(h.max_norm) << ','
            << detector::to_string(h.arch.hidden_activation) << ','
            << space.output_activations[static_cast<std::size_t>(e.chromosome.genes[7])] << ',' << fixed(e.objectives.dr)
            << ',' << fixed(e.objectives.fa) << '\n';
    }
}

/// Fitness that trains a detector with the chromosome's hyperparameters on
/// `train_set` for a fixed budget and scores it on `valid_set`.
inline FitnessFn make_detector_fitness(const detector::Examples& train_set, const detector::Examples& valid_set,
                                       detector::TrainConfig base, detector::ModelKind kind, const SearchSpace& space) {
    return [=](const Chromosome& c) {
        const auto h = decode(c, space, kind);
        detector::TrainConfig cfg = base;
        cfg.optimizer = h.optimizer;
        cfg.init = h.init;
        cfg.dropout = h.dropout;
        cfg.max_norm = h.max_norm;
        const auto trained = detector::train(h.arch, train_set, valid_set, cfg);
        const auto predicted = detector::decide_all(detector::class_probabilities(trained.model, valid_set.x));
        const auto s = detector::lenient_metrics(valid_set.y, predicted);
        return Objectives{s.valid_dr, s.valid_fa};
    };
}

}  // namespace evguard
