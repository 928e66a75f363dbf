#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qmodes {

using Rng = std::mt19937_64;

// Deterministic stream seed for (seed, a, b) via SplitMix64 mixing.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

struct GeneSpec {
    std::string name;
    double mean = 0.0;
    double sigma = 1.0;
    double min = 0.0;
    std::optional<double> max;
    std::string unit;

    bool admits(double x) const { return x >= min && (!max || x <= *max); }
};

enum class FitnessMode { SingleHG0, AveragedHG012 };

std::string to_string(FitnessMode mode);
FitnessMode fitness_mode_from_string(const std::string& s);

struct GAConfig {
    int population = 48;
    int generations = 120;
    double mutation_rate = 0.15;
    double crossover_spread = 0.5;  // d: beta ~ U[-d, d + 1]
    std::uint64_t seed = 0;
    FitnessMode fitness_mode = FitnessMode::SingleHG0;
    std::vector<GeneSpec> genome;
    unsigned threads = 1;  // concurrent fitness evaluations; results do not depend on it
};

void validate(const GAConfig& cfg);

struct Individual {
    std::vector<double> genes;
    std::optional<double> fitness;
    int generation = 0;
};

inline constexpr int kMaxInitRejections = 10000;
inline constexpr int kMaxOperatorResamples = 1000;
inline constexpr double kPenaltyFitness = 1e3;

// Genes drawn from N(mean, sigma), rejected until inside bounds.
std::vector<Individual> init_population(const GAConfig& cfg, Rng& rng);

// Index of the best member of a uniformly drawn subset of size N/2 (without
// replacement); ties go to the lowest population index.
std::size_t tournament_select(const std::vector<Individual>& population, Rng& rng);

// c_k = beta_k p1 + (1 - beta_k) p2, one beta per offspring, both redrawn
// until both children satisfy every bound.
std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            const GAConfig& cfg, Rng& rng);
std::pair<Individual, Individual> crossover_with(const Individual& p1, const Individual& p2,
                                                 double beta1, double beta2);

// With probability mutation_rate every gene gets N(0, sigma_j) noise,
// redrawn per gene until inside bounds.
Individual mutate(const Individual& x, const GAConfig& cfg, Rng& rng);

struct EvalContext {
    // Schmidt number of the candidate under the given HG pump order.
    std::function<double(const std::vector<double>& genes, int hg_order)> schmidt_number;
    FitnessMode mode = FitnessMode::SingleHG0;
    double target_K = 1.0;
    double penalty = kPenaltyFitness;
    std::function<void(const std::string&)> log;  // receives penalty reasons; may be empty
};

// |K_s - K| for HG0, or the mean over HG0..HG2. Library errors give the penalty.
double fitness(const std::vector<double>& x, const EvalContext& ctx);

struct GenerationStats {
    int generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double best_ever = 0.0;
    std::vector<double> best_genes;
    int penalized = 0;
};

struct GAResult {
    Individual best;
    std::vector<GenerationStats> history;
    std::vector<Individual> final_population;  // last offspring, not yet evaluated
    std::vector<Individual> archive;           // every individual, when requested
    bool interrupted = false;
};

struct EvolveOptions {
    std::function<void(const GenerationStats&, const std::vector<Individual>&)> on_generation;
    const std::atomic<bool>* stop = nullptr;
    bool keep_archive = false;
};

// Generations of {evaluate, record, select, crossover, mutate, replace}.
// The best-ever individual is tracked outside the population.
GAResult evolve(const GAConfig& cfg, const EvalContext& ctx, const EvolveOptions& opt = {});

}  // namespace qmodes
