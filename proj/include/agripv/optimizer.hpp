#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "agripv/pipeline.hpp"

namespace agripv {

struct ParetoSolution {
    DecisionVector decision;
    Objectives objectives;
    int generation = 0;                    // generation the point entered the archive
    std::size_t evaluation_count = 0;      // total evaluations spent when it entered
};

struct OptimizerConfig {
    int population = 48;
    int generations = 60;
    double crossover_rate = 0.9;
    double mutation_rate = 0.5;  // per variable, 1/n for the 2-variable decision
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    std::uint64_t seed = 1;
    int workers = 1;
};

void validate_optimizer(const OptimizerConfig& config);

// Evaluates a whole generation; results must be index-aligned with the input.
using BatchEvaluator =
    std::function<std::vector<Evaluation>(const std::vector<DecisionVector>&)>;

// Called after every generation with the current non-dominated archive.
using GenerationObserver =
    std::function<void(int generation, const std::vector<ParetoSolution>& archive)>;

// Elitist non-dominated-sorting GA (NSGA-II family): simulated binary
// crossover, bounded polynomial mutation, binary tournaments on (rank,
// crowding), and an unbounded running archive truncated to the population
// size on return. The seed fully determines the run; candidate generation is
// sequential and evaluation results are gathered by index, so the archive is
// identical for any parallel evaluation width.
std::vector<ParetoSolution> optimize(const OptimizerConfig& config,
                                     const DecisionBounds& bounds,
                                     const BatchEvaluator& evaluate,
                                     const GenerationObserver& observer = nullptr);

// Sample Pearson correlation. Requires at least 3 samples and nonzero
// variance in both series; throws NumericalError otherwise.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct CorrelationEntry {
    std::string variable;   // "azimuth_deg" or "distance_m"
    std::string objective;  // "ler", "std_kw", "energy_kwh"
    double value = 0.0;
    bool defined = false;
};

struct DensityBin {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

struct AnalysisTables {
    std::vector<ParetoSolution> solutions;
    std::vector<CorrelationEntry> correlations;  // the six variable/objective pairs
    std::vector<DensityBin> azimuth_density;     // 18 bins over the azimuth range
    std::vector<DensityBin> distance_density;    // 15 bins over the distance range
};

AnalysisTables analyze(const std::vector<ParetoSolution>& archive,
                       const DecisionBounds& bounds);

} // namespace agripv
