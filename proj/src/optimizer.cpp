#include "qmodes/optimizer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "qmodes/errors.hpp"

namespace qmodes {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kInitStream = 0xffffffffULL;

std::string describe(const Individual& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.genes.size(); ++i) os << (i ? ", " : "") << x.genes[i];
    os << ")";
    return os.str();
}

bool admitted(const GAConfig& cfg, const std::vector<double>& genes) {
    for (std::size_t j = 0; j < genes.size(); ++j)
        if (!cfg.genome[j].admits(genes[j])) return false;
    return true;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

std::string to_string(FitnessMode mode) {
    return mode == FitnessMode::SingleHG0 ? "hg0" : "hg012";
}

FitnessMode fitness_mode_from_string(const std::string& s) {
    if (s == "hg0") return FitnessMode::SingleHG0;
    if (s == "hg012") return FitnessMode::AveragedHG012;
    throw ConfigError("unknown fitness mode '" + s + "' (expected hg0 or hg012)");
}

void validate(const GAConfig& cfg) {
    if (cfg.population < 4 || cfg.population % 2 != 0)
        throw ConfigError("GA population must be even and at least 4");
    if (cfg.generations < 1) throw ConfigError("GA needs at least one generation");
    if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0))
        throw ConfigError("mutation rate must lie in [0, 1]");
    if (!(cfg.crossover_spread >= 0.0) || !std::isfinite(cfg.crossover_spread))
        throw ConfigError("crossover spread d must be non-negative");
    if (cfg.genome.empty()) throw ConfigError("GA genome is empty");
    for (const auto& g : cfg.genome) {
        if (!(g.sigma > 0.0) || !std::isfinite(g.sigma) || !std::isfinite(g.mean))
            throw ConfigError("gene '" + g.name + "' needs finite mean and sigma > 0");
        if (g.max && !(*g.max > g.min))
            throw InfeasibleBoundsError("gene '" + g.name + "' has max <= min");
    }
}

std::vector<Individual> init_population(const GAConfig& cfg, Rng& rng) {
    validate(cfg);
    std::vector<Individual> pop(static_cast<std::size_t>(cfg.population));
    for (auto& ind : pop) {
        ind.generation = 0;
        ind.genes.resize(cfg.genome.size());
        for (std::size_t j = 0; j < cfg.genome.size(); ++j) {
            const auto& g = cfg.genome[j];
            std::normal_distribution<double> dist(g.mean, g.sigma);
            int rejections = 0;
            double x = dist(rng);
            while (!g.admits(x)) {
                if (++rejections > kMaxInitRejections)
                    throw InfeasibleBoundsError("gene '" + g.name + "': more than " +
                                                std::to_string(kMaxInitRejections) +
                                                " consecutive draws outside its bounds");
                x = dist(rng);
            }
            ind.genes[j] = x;
        }
    }
    return pop;
}

std::size_t tournament_select(const std::vector<Individual>& population, Rng& rng) {
    const std::size_t n = population.size();
    if (n < 2) throw ContractError("tournament needs at least two individuals");
    for (std::size_t i = 0; i < n; ++i)
        if (!population[i].fitness)
            throw ContractError("tournament over individual " + std::to_string(i) +
                                " without cached fitness");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t k = n / 2;
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::size_t best = idx[0];
    for (std::size_t i = 1; i < k; ++i) {
        const std::size_t c = idx[i];
        const double fc = *population[c].fitness, fb = *population[best].fitness;
        if (fc < fb || (fc == fb && c < best)) best = c;
    }
    return best;
}

std::pair<Individual, Individual> crossover_with(const Individual& p1, const Individual& p2,
                                                 double beta1, double beta2) {
    if (p1.genes.size() != p2.genes.size()) throw ContractError("parents differ in genome length");
    std::pair<Individual, Individual> c;
    c.first.genes.resize(p1.genes.size());
    c.second.genes.resize(p1.genes.size());
    for (std::size_t i = 0; i < p1.genes.size(); ++i) {
        c.first.genes[i] = beta1 * p1.genes[i] + (1.0 - beta1) * p2.genes[i];
        c.second.genes[i] = beta2 * p1.genes[i] + (1.0 - beta2) * p2.genes[i];
    }
    return c;
}

std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            const GAConfig& cfg, Rng& rng) {
    std::uniform_real_distribution<double> beta(-cfg.crossover_spread, cfg.crossover_spread + 1.0);
    for (int attempt = 0; attempt < kMaxOperatorResamples; ++attempt) {
        const double b1 = beta(rng);
        const double b2 = beta(rng);
        auto c = crossover_with(p1, p2, b1, b2);
        if (admitted(cfg, c.first.genes) && admitted(cfg, c.second.genes)) return c;
    }
    throw InfeasibleBoundsError("crossover of parents " + describe(p1) + " and " + describe(p2) +
                                " found no admissible offspring in " +
                                std::to_string(kMaxOperatorResamples) + " draws");
}

Individual mutate(const Individual& x, const GAConfig& cfg, Rng& rng) {
    std::bernoulli_distribution coin(cfg.mutation_rate);
    if (!coin(rng)) return x;
    Individual out = x;
    out.fitness.reset();
    for (std::size_t j = 0; j < cfg.genome.size(); ++j) {
        const auto& g = cfg.genome[j];
        std::normal_distribution<double> noise(0.0, g.sigma);
        int attempt = 0;
        double v = x.genes[j] + noise(rng);
        while (!g.admits(v)) {
            if (++attempt >= kMaxOperatorResamples)
                throw InfeasibleBoundsError("mutation of gene '" + g.name + "' at " +
                                            std::to_string(x.genes[j]) +
                                            " found no admissible value");
            v = x.genes[j] + noise(rng);
        }
        out.genes[j] = v;
    }
    return out;
}

double fitness(const std::vector<double>& x, const EvalContext& ctx) {
    if (!ctx.schmidt_number) throw ContractError("evaluation context has no Schmidt-number hook");
    const int orders = ctx.mode == FitnessMode::SingleHG0 ? 1 : 3;
    double sum = 0.0;
    for (int k = 0; k < orders; ++k) {
        try {
            const double K = ctx.schmidt_number(x, k);
            if (!std::isfinite(K)) throw NumericalError("non-finite Schmidt number");
            sum += std::abs(ctx.target_K - K);
        } catch (const Error& e) {
            if (ctx.log) ctx.log(std::string("penalized candidate: ") + e.what());
            return ctx.penalty;
        }
    }
    return sum / orders;
}

GAResult evolve(const GAConfig& cfg, const EvalContext& ctx, const EvolveOptions& opt) {
    validate(cfg);
    GAResult result;
    Rng init_rng(derive_seed(cfg.seed, 0, kInitStream));
    std::vector<Individual> pop = init_population(cfg, init_rng);
    std::optional<Individual> best;

    for (int g = 0; g < cfg.generations; ++g) {
        if (opt.stop && opt.stop->load()) {
            result.interrupted = true;
            break;
        }
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (!pop[i].fitness) todo.push_back(i);
        const unsigned workers =
            std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(todo.size())));
        if (workers == 1) {
            for (std::size_t i : todo) pop[i].fitness = fitness(pop[i].genes, ctx);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::exception_ptr> errors(workers);
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t t; (t = next.fetch_add(1)) < todo.size();)
                            pop[todo[t]].fitness = fitness(pop[todo[t]].genes, ctx);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            for (auto& t : pool) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }

        GenerationStats st;
        st.generation = g;
        std::size_t arg = 0;
        double total = 0.0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            const double f = *pop[i].fitness;
            total += f;
            if (f >= ctx.penalty) ++st.penalized;
            if (f < *pop[arg].fitness) arg = i;
        }
        st.best = *pop[arg].fitness;
        st.mean = total / static_cast<double>(pop.size());
        st.best_genes = pop[arg].genes;
        if (!best || st.best < *best->fitness) best = pop[arg];
        st.best_ever = *best->fitness;
        result.history.push_back(st);
        if (opt.keep_archive)
            result.archive.insert(result.archive.end(), pop.begin(), pop.end());
        if (opt.on_generation) opt.on_generation(st, pop);

        std::vector<Individual> next(pop.size());
        for (std::size_t p = 0; p < pop.size() / 2; ++p) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(g) + 1, p));
            const Individual& a = pop[tournament_select(pop, rng)];
            const Individual& b = pop[tournament_select(pop, rng)];
            auto [c1, c2] = crossover(a, b, cfg, rng);
            c1 = mutate(c1, cfg, rng);
            c2 = mutate(c2, cfg, rng);
            c1.fitness.reset();
            c2.fitness.reset();
            c1.generation = c2.generation = g + 1;
            next[2 * p] = std::move(c1);
            next[2 * p + 1] = std::move(c2);
        }
        pop = std::move(next);
    }
    if (opt.keep_archive) result.archive.insert(result.archive.end(), pop.begin(), pop.end());
    result.final_population = std::move(pop);
    if (best) result.best = *best;
    return result;
}

}  // namespace qmodes
