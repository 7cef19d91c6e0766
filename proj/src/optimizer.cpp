#include "agripv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace agripv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Canonical 53-bit uniform draw: identical on every platform for a given
// mt19937_64 stream, unlike std::uniform_real_distribution.
double urand(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Internal minimized objective triple (-LER, STD, -energy).
struct MinTriple {
    double f[3];
};

MinTriple minimized(const Objectives& o) {
    return {{-o.ler, o.std_kw, -o.energy_kwh}};
}

bool dominates(const MinTriple& a, const MinTriple& b) {
    bool strict = false;
    for (int i = 0; i < 3; ++i) {
        if (a.f[i] > b.f[i] + 0.0) return false;
        if (a.f[i] < b.f[i]) strict = true;
    }
    return strict;
}

struct Individual {
    DecisionVector decision;
    Objectives objectives;
    MinTriple fm{};
    int rank = 0;
    double crowding = 0.0;
};

std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& pop) {
    const int n = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated(n);
    std::vector<int> count(n, 0);
    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pop[p].fm, pop[q].fm))
                dominated[p].push_back(q);
            else if (dominates(pop[q].fm, pop[p].fm))
                ++count[p];
        }
        if (count[p] == 0) {
            pop[p].rank = 0;
            fronts[0].push_back(p);
        }
    }
    int i = 0;
    while (!fronts[i].empty()) {
        std::vector<int> next;
        for (int p : fronts[i]) {
            for (int q : dominated[p]) {
                if (--count[q] == 0) {
                    pop[q].rank = i + 1;
                    next.push_back(q);
                }
            }
        }
        ++i;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

void assign_crowding(std::vector<Individual>& pop, const std::vector<int>& front) {
    for (int p : front) pop[p].crowding = 0.0;
    const int m = static_cast<int>(front.size());
    if (m <= 2) {
        for (int p : front) pop[p].crowding = kInf;
        return;
    }
    std::vector<int> order(front);
    for (int obj = 0; obj < 3; ++obj) {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (pop[a].fm.f[obj] != pop[b].fm.f[obj]) return pop[a].fm.f[obj] < pop[b].fm.f[obj];
            return a < b;
        });
        const double lo = pop[order.front()].fm.f[obj];
        const double hi = pop[order.back()].fm.f[obj];
        pop[order.front()].crowding = kInf;
        pop[order.back()].crowding = kInf;
        if (!(hi > lo)) continue;
        for (int k = 1; k + 1 < m; ++k) {
            if (pop[order[k]].crowding == kInf) continue;
            pop[order[k]].crowding +=
                (pop[order[k + 1]].fm.f[obj] - pop[order[k - 1]].fm.f[obj]) / (hi - lo);
        }
    }
}

// True when a beats b in a tournament: lower rank, then larger crowding,
// then the stable lower index.
bool tournament_better(const std::vector<Individual>& pop, int a, int b) {
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank;
    if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding;
    return a < b;
}

double sbx_child(double x1, double x2, double beta, bool first) {
    return first ? 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2)
                 : 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
}

void crossover(const OptimizerConfig& cfg, std::mt19937_64& rng, double lo, double hi,
               double& c1, double& c2) {
    // assumes c1, c2 preloaded with the parent values
    if (std::fabs(c1 - c2) < 1e-14) return;
    const double u = urand(rng);
    const double exponent = 1.0 / (cfg.eta_crossover + 1.0);
    const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent)
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
    const double x1 = c1, x2 = c2;
    c1 = std::clamp(sbx_child(x1, x2, beta, true), lo, hi);
    c2 = std::clamp(sbx_child(x1, x2, beta, false), lo, hi);
}

void mutate(const OptimizerConfig& cfg, std::mt19937_64& rng, double lo, double hi, double& x) {
    if (urand(rng) >= cfg.mutation_rate) return;
    const double range = hi - lo;
    const double u = urand(rng);
    const double exponent = 1.0 / (cfg.eta_mutation + 1.0);
    double dq;
    if (u <= 0.5) {
        const double d1 = (x - lo) / range;
        dq = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, cfg.eta_mutation + 1.0),
                      exponent) -
             1.0;
    } else {
        const double d2 = (hi - x) / range;
        dq = 1.0 - std::pow(2.0 * (1.0 - u) +
                                2.0 * (u - 0.5) * std::pow(1.0 - d2, cfg.eta_mutation + 1.0),
                            exponent);
    }
    x = std::clamp(x + dq * range, lo, hi);
}

bool same_decision(const DecisionVector& a, const DecisionVector& b) {
    return a.azimuth_deg == b.azimuth_deg && a.distance_m == b.distance_m;
}

// Inserts a candidate into the running archive, keeping it mutually
// non-dominated and free of duplicate decisions.
void archive_insert(std::vector<ParetoSolution>& archive, const Evaluation& ev, int generation,
                    std::size_t eval_count) {
    const MinTriple fm = minimized(ev.objectives);
    for (const ParetoSolution& s : archive) {
        if (same_decision(s.decision, ev.decision)) return;
        if (dominates(minimized(s.objectives), fm)) return;
    }
    archive.erase(std::remove_if(archive.begin(), archive.end(),
                                 [&](const ParetoSolution& s) {
                                     return dominates(fm, minimized(s.objectives));
                                 }),
                  archive.end());
    ParetoSolution sol;
    sol.decision = ev.decision;
    sol.objectives = ev.objectives;
    sol.generation = generation;
    sol.evaluation_count = eval_count;
    archive.push_back(sol);
}

void sort_archive(std::vector<ParetoSolution>& archive) {
    std::sort(archive.begin(), archive.end(), [](const ParetoSolution& a, const ParetoSolution& b) {
        if (a.decision.azimuth_deg != b.decision.azimuth_deg)
            return a.decision.azimuth_deg < b.decision.azimuth_deg;
        if (a.decision.distance_m != b.decision.distance_m)
            return a.decision.distance_m < b.decision.distance_m;
        return a.objectives.ler < b.objectives.ler;
    });
}

// Crowding-distance truncation that always keeps per-objective extremes.
void truncate_archive(std::vector<ParetoSolution>& archive, std::size_t keep) {
    if (archive.size() <= keep) return;
    std::vector<Individual> pop(archive.size());
    for (std::size_t i = 0; i < archive.size(); ++i) {
        pop[i].objectives = archive[i].objectives;
        pop[i].fm = minimized(archive[i].objectives);
    }
    std::vector<int> all(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) all[i] = static_cast<int>(i);
    assign_crowding(pop, all);
    std::vector<int> order(all);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding;
        return a < b;
    });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    std::vector<ParetoSolution> kept;
    kept.reserve(keep);
    for (int i : order) kept.push_back(archive[static_cast<std::size_t>(i)]);
    archive.swap(kept);
}

} // namespace

void validate_optimizer(const OptimizerConfig& config) {
    if (config.population < 8 || config.population % 2 != 0)
        throw ConfigError("optimizer population must be even and at least 8");
    if (config.generations < 1) throw ConfigError("optimizer generations must be positive");
    if (!(config.crossover_rate >= 0.0 && config.crossover_rate <= 1.0))
        throw ConfigError("crossover_rate must lie in [0, 1]");
    if (!(config.mutation_rate >= 0.0 && config.mutation_rate <= 1.0))
        throw ConfigError("mutation_rate must lie in [0, 1]");
    if (!(config.eta_crossover > 0.0) || !(config.eta_mutation > 0.0))
        throw ConfigError("distribution indices must be positive");
    if (config.workers < 1) throw ConfigError("workers must be at least 1");
}

std::vector<ParetoSolution> optimize(const OptimizerConfig& config, const DecisionBounds& bounds,
                                     const BatchEvaluator& evaluate,
                                     const GenerationObserver& observer) {
    validate_optimizer(config);
    if (!evaluate) throw ConfigError("optimizer requires an evaluation function");
    if (!(bounds.azimuth_lo < bounds.azimuth_hi) || !(bounds.distance_lo < bounds.distance_hi))
        throw ConfigError("decision bounds must be non-degenerate");

    std::mt19937_64 rng(config.seed);
    const int n = config.population;

    std::vector<DecisionVector> decisions(n);
    for (DecisionVector& d : decisions) {
        d.azimuth_deg = bounds.azimuth_lo + urand(rng) * (bounds.azimuth_hi - bounds.azimuth_lo);
        d.distance_m = bounds.distance_lo + urand(rng) * (bounds.distance_hi - bounds.distance_lo);
    }

    std::vector<ParetoSolution> archive;
    std::size_t eval_count = 0;

    auto eval_into = [&](const std::vector<DecisionVector>& ds, int generation) {
        std::vector<Evaluation> evs = evaluate(ds);
        if (evs.size() != ds.size())
            throw NumericalError("batch evaluator returned a mismatched result count");
        eval_count += evs.size();
        for (const Evaluation& e : evs) archive_insert(archive, e, generation, eval_count);
        return evs;
    };

    std::vector<Individual> parents(n);
    {
        const std::vector<Evaluation> evs = eval_into(decisions, 0);
        for (int i = 0; i < n; ++i) {
            parents[i].decision = evs[i].decision;
            parents[i].objectives = evs[i].objectives;
            parents[i].fm = minimized(evs[i].objectives);
        }
        auto fronts = non_dominated_sort(parents);
        for (const auto& front : fronts) assign_crowding(parents, front);
        if (observer) observer(0, archive);
    }

    for (int gen = 1; gen <= config.generations; ++gen) {
        // Offspring decisions, generated sequentially for determinism.
        std::vector<DecisionVector> offspring;
        offspring.reserve(n);
        while (static_cast<int>(offspring.size()) < n) {
            auto pick = [&]() {
                const int a = static_cast<int>(urand(rng) * n) % n;
                const int b = static_cast<int>(urand(rng) * n) % n;
                return tournament_better(parents, a, b) ? a : b;
            };
            const Individual& p1 = parents[pick()];
            const Individual& p2 = parents[pick()];
            DecisionVector c1 = p1.decision, c2 = p2.decision;
            if (urand(rng) <= config.crossover_rate) {
                crossover(config, rng, bounds.azimuth_lo, bounds.azimuth_hi, c1.azimuth_deg,
                          c2.azimuth_deg);
                crossover(config, rng, bounds.distance_lo, bounds.distance_hi, c1.distance_m,
                          c2.distance_m);
            }
            mutate(config, rng, bounds.azimuth_lo, bounds.azimuth_hi, c1.azimuth_deg);
            mutate(config, rng, bounds.distance_lo, bounds.distance_hi, c1.distance_m);
            mutate(config, rng, bounds.azimuth_lo, bounds.azimuth_hi, c2.azimuth_deg);
            mutate(config, rng, bounds.distance_lo, bounds.distance_hi, c2.distance_m);
            offspring.push_back(c1);
            if (static_cast<int>(offspring.size()) < n) offspring.push_back(c2);
        }

        const std::vector<Evaluation> evs = eval_into(offspring, gen);

        // Environmental selection over the combined pool.
        std::vector<Individual> pool(parents);
        pool.resize(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            Individual& ind = pool[static_cast<std::size_t>(n + i)];
            ind.decision = evs[i].decision;
            ind.objectives = evs[i].objectives;
            ind.fm = minimized(evs[i].objectives);
        }
        auto fronts = non_dominated_sort(pool);
        for (const auto& front : fronts) assign_crowding(pool, front);

        std::vector<int> chosen;
        chosen.reserve(n);
        for (const auto& front : fronts) {
            if (static_cast<int>(chosen.size() + front.size()) <= n) {
                chosen.insert(chosen.end(), front.begin(), front.end());
                if (static_cast<int>(chosen.size()) == n) break;
                continue;
            }
            std::vector<int> rest(front);
            std::sort(rest.begin(), rest.end(), [&](int a, int b) {
                if (pool[a].crowding != pool[b].crowding)
                    return pool[a].crowding > pool[b].crowding;
                return a < b;
            });
            rest.resize(static_cast<std::size_t>(n) - chosen.size());
            chosen.insert(chosen.end(), rest.begin(), rest.end());
            break;
        }

        std::vector<Individual> next;
        next.reserve(n);
        for (int idx : chosen) next.push_back(pool[static_cast<std::size_t>(idx)]);
        parents.swap(next);
        auto pfronts = non_dominated_sort(parents);
        for (const auto& front : pfronts) assign_crowding(parents, front);

        if (observer) observer(gen, archive);
    }

    truncate_archive(archive, static_cast<std::size_t>(n));
    sort_archive(archive);
    return archive;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw NumericalError("pearson requires equally sized samples");
    const std::size_t n = xs.size();
    if (n < 3) throw NumericalError("pearson requires at least 3 samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw NumericalError("pearson undefined for zero-variance samples");
    return sxy / std::sqrt(sxx * syy);
}

AnalysisTables analyze(const std::vector<ParetoSolution>& archive,
                       const DecisionBounds& bounds) {
    if (archive.empty()) throw ConfigError("analysis requires a non-empty archive");
    AnalysisTables t;
    t.solutions = archive;

    std::vector<double> az, d, ler, stdv, energy;
    for (const ParetoSolution& s : archive) {
        az.push_back(s.decision.azimuth_deg);
        d.push_back(s.decision.distance_m);
        ler.push_back(s.objectives.ler);
        stdv.push_back(s.objectives.std_kw);
        energy.push_back(s.objectives.energy_kwh);
    }

    const std::vector<std::pair<std::string, const std::vector<double>*>> vars = {
        {"azimuth_deg", &az}, {"distance_m", &d}};
    const std::vector<std::pair<std::string, const std::vector<double>*>> objs = {
        {"ler", &ler}, {"std_kw", &stdv}, {"energy_kwh", &energy}};
    for (const auto& v : vars) {
        for (const auto& o : objs) {
            CorrelationEntry e;
            e.variable = v.first;
            e.objective = o.first;
            try {
                e.value = pearson(*v.second, *o.second);
                e.defined = true;
            } catch (const NumericalError&) {
                e.value = 0.0;
                e.defined = false;
            }
            t.correlations.push_back(e);
        }
    }

    auto histogram = [](const std::vector<double>& xs, double lo, double hi, int bins) {
        std::vector<DensityBin> out(static_cast<std::size_t>(bins));
        const double w = (hi - lo) / bins;
        for (int i = 0; i < bins; ++i) {
            out[static_cast<std::size_t>(i)].lo = lo + i * w;
            out[static_cast<std::size_t>(i)].hi = lo + (i + 1) * w;
        }
        for (double x : xs) {
            int i = static_cast<int>(std::floor((x - lo) / w));
            i = std::clamp(i, 0, bins - 1);  // top edge falls in the last bin
            ++out[static_cast<std::size_t>(i)].count;
        }
        return out;
    };
    t.azimuth_density = histogram(az, bounds.azimuth_lo, bounds.azimuth_hi, 18);
    t.distance_density = histogram(d, bounds.distance_lo, bounds.distance_hi, 15);
    return t;
}

} // namespace agripv
