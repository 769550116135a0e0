#include "mabea/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace mabea {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::mab_ea: return "mab_ea";
        case Mode::bai: return "bai";
        case Mode::campaign: return "campaign";
        case Mode::neighborhood: return "neighborhood";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    if (name == "mab_ea") return Mode::mab_ea;
    if (name == "bai") return Mode::bai;
    if (name == "campaign") return Mode::campaign;
    if (name == "neighborhood") return Mode::neighborhood;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

void EvolutionConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (population_size < 2) fail("population_size must be at least 2");
    if (generations < 1) fail("generations must be at least 1");
    if (traffic_per_generation < population_size) {
        fail("traffic_per_generation must be at least population_size");
    }
    if (!(elite_percent > 0.0 && elite_percent <= 100.0)) fail("elite_percent must be in (0, 100]");
    if (!(parent_percent > 0.0 && parent_percent <= 100.0)) {
        fail("parent_percent must be in (0, 100]");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) fail("mutation_prob must be in [0, 1]");
    if (mode == Mode::bai) {
        if (bai_elite_size < 2) fail("bai_elite_size must be at least 2");
        if (bai_traffic < bai_elite_size) fail("bai_traffic must be at least bai_elite_size");
    }
    if (mode == Mode::neighborhood && neighborhood_size < 1) {
        fail("neighborhood_size must be at least 1");
    }
}

ElitePool::ElitePool(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        throw std::invalid_argument("elite pool capacity must be positive");
    }
}

void ElitePool::add(EliteEntry entry) {
    entries_.push_back(std::move(entry));
    while (entries_.size() > capacity_) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            if (entries_[i].fitness <= entries_[worst].fitness) {
                worst = i;
            }
        }
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
    }
}

std::size_t percentile_count(std::size_t population, double percent) {
    const double exact = static_cast<double>(population) * percent / 100.0;
    const double nearest = std::round(exact);
    // Products like 20 * 20 / 100 should not round up past an exact integer.
    const double count = std::abs(exact - nearest) < 1e-9 ? nearest : std::ceil(exact);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(0.0, count)), 1, population);
}

std::vector<std::size_t> rank_descending(std::span<const double> fitness) {
    std::vector<std::size_t> order(fitness.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
    return order;
}

double neighborhood_fitness(const Genome& candidate, std::span<const EvaluatedDesign> evaluated,
                            std::size_t k) {
    if (evaluated.empty()) {
        throw std::invalid_argument("neighborhood_fitness: nothing evaluated yet");
    }
    if (k == 0) {
        throw std::invalid_argument("neighborhood_fitness: k must be positive");
    }
    std::vector<std::pair<std::size_t, std::size_t>> by_distance;  // (distance, order)
    by_distance.reserve(evaluated.size());
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
        by_distance.emplace_back(hamming_distance(candidate, evaluated[i].genome), i);
    }
    const std::size_t take = std::min(k, by_distance.size());
    std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(take),
                      by_distance.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
        sum += evaluated[by_distance[i].second].fitness;
    }
    return sum / static_cast<double>(take);
}

namespace {

/// Routes arm pulls to the environment and tallies traffic.
class PopulationSource final : public RewardSource {
public:
    PopulationSource(DesignEnvironment& env, Rng& rng, std::span<const Genome> designs)
        : env_(env), rng_(rng), designs_(designs) {}

    bool pull(std::size_t arm) override {
        const bool converted = env_.visit(designs_[arm], rng_);
        ++visits_;
        conversions_ += converted ? 1 : 0;
        return converted;
    }

    [[nodiscard]] std::uint64_t visits() const { return visits_; }
    [[nodiscard]] std::uint64_t conversions() const { return conversions_; }

private:
    DesignEnvironment& env_;
    Rng& rng_;
    std::span<const Genome> designs_;
    std::uint64_t visits_ = 0;
    std::uint64_t conversions_ = 0;
};

struct Evaluation {
    std::vector<ArmState> arms;
    std::uint64_t conversions = 0;
    std::uint64_t visits = 0;
};

/// Spends `budget` pulls on `designs` starting from `arms`.
Evaluation evaluate(Policy policy, std::span<const Genome> designs, std::vector<ArmState> arms,
                    SharedState& shared, std::uint64_t budget, DesignEnvironment& env, Rng& rng) {
    PopulationSource source(env, rng, designs);
    run_policy(policy, arms, shared, budget, source, rng);
    return {std::move(arms), source.conversions(), source.visits()};
}

/// Appends offspring until `out` holds `target` genomes. `accept` decides
/// freshness (and records the child when it accepts). After
/// kFillAttemptsPerSlot * K consecutive rejections the remaining slots are
/// padded with rejected children. Returns true when padding happened.
bool fill_offspring(std::vector<Genome>& out, std::size_t target,
                    std::span<const Genome> parents, std::span<const double> parent_fitness,
                    const EvolutionConfig& cfg, const SearchSpace& space, Rng& rng,
                    const std::function<bool(const Genome&)>& accept) {
    const std::size_t bound = kFillAttemptsPerSlot * cfg.population_size;
    std::size_t rejected_in_a_row = 0;
    bool padded = false;
    while (out.size() < target) {
        const auto [a, b] = fitness_proportionate_select(parent_fitness, rng);
        Genome child = mutate(uniform_crossover(parents[a], parents[b], rng), space,
                              cfg.mutation_prob, rng);
        if (padded || accept(child)) {
            out.push_back(std::move(child));
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row >= bound) {
            padded = true;
            out.push_back(std::move(child));
        }
    }
    return padded;
}

/// Duplicate-free random designs; pads with repeats when the space is too
/// small.
std::vector<Genome> initial_population(const EvolutionConfig& cfg, const SearchSpace& space,
                                       Rng& rng, bool& padded) {
    std::set<Genome> seen;
    std::vector<Genome> out;
    const std::size_t bound = kFillAttemptsPerSlot * cfg.population_size;
    std::size_t rejected_in_a_row = 0;
    while (out.size() < cfg.population_size) {
        Genome g = random_genome(space, rng);
        if (padded || seen.insert(g).second) {
            out.push_back(std::move(g));
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row >= bound) {
            padded = true;
            out.push_back(std::move(g));
        }
    }
    return out;
}

std::vector<Candidate> to_candidates(std::vector<Genome> genomes, std::size_t birth) {
    std::vector<Candidate> out;
    out.reserve(genomes.size());
    for (auto& g : genomes) {
        out.push_back({std::move(g), ArmState{}, birth});
    }
    return out;
}

std::vector<Genome> genomes_of(std::span<const Candidate> population) {
    std::vector<Genome> out;
    out.reserve(population.size());
    for (const auto& c : population) {
        out.push_back(c.genome);
    }
    return out;
}

std::size_t parent_pool_size(const EvolutionConfig& cfg) {
    return std::max<std::size_t>(2, percentile_count(cfg.population_size, cfg.parent_percent));
}

/// Shared loop of the modes with a duplicate archive (mab_ea, bai,
/// neighborhood).
RunResult run_archived(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng) {
    cfg.validate();
    const SearchSpace& space = env.space();
    const std::size_t K = cfg.population_size;
    const bool bai = cfg.mode == Mode::bai;
    const bool neighborhood = cfg.mode == Mode::neighborhood;

    RunResult result;
    bool padded = false;
    std::vector<Genome> population = initial_population(cfg, space, rng, padded);
    result.duplicate_padded = padded;

    Archive archive;
    for (const auto& g : population) {
        (void)archive.check_insert(g);
    }
    std::optional<ElitePool> pool;
    if (bai) {
        pool.emplace(cfg.bai_elite_size);
    }
    std::vector<EvaluatedDesign> history;

    const std::size_t elite_count = percentile_count(K, cfg.elite_percent);
    const std::size_t parent_count = parent_pool_size(cfg);

    for (std::size_t g = 1; g <= cfg.generations; ++g) {
        SharedState shared;
        Evaluation eval = evaluate(cfg.policy, population, std::vector<ArmState>(K), shared,
                                   cfg.traffic_per_generation, env, rng);

        GenerationSnapshot snap;
        snap.generation = g;
        snap.conversions = eval.conversions;
        snap.visits = eval.visits;
        snap.fitness.resize(K);
        snap.population.reserve(K);
        for (std::size_t i = 0; i < K; ++i) {
            snap.fitness[i] = eval.arms[i].empirical_mean();
            snap.population.push_back({population[i], eval.arms[i], g});
        }
        if (neighborhood) {
            for (std::size_t i = 0; i < K; ++i) {
                history.push_back({population[i], snap.fitness[i]});
            }
            for (std::size_t i = 0; i < K; ++i) {
                snap.fitness[i] = neighborhood_fitness(population[i], history, cfg.neighborhood_size);
            }
        }

        const auto order = rank_descending(snap.fitness);
        if (bai) {
            for (std::size_t r = 0; r < elite_count; ++r) {
                pool->add({population[order[r]], snap.fitness[order[r]], g});
            }
        }
        std::vector<Genome> parents;
        std::vector<double> parent_fitness;
        for (std::size_t r = 0; r < std::min(parent_count, K); ++r) {
            parents.push_back(population[order[r]]);
            parent_fitness.push_back(snap.fitness[order[r]]);
        }

        std::vector<Genome> next;
        next.reserve(K);
        if (!bai) {
            for (std::size_t r = 0; r < elite_count; ++r) {
                next.push_back(population[order[r]]);
            }
        }
        snap.duplicate_padded =
            fill_offspring(next, K, parents, parent_fitness, cfg, space, rng,
                           [&](const Genome& child) {
                               return archive.check_insert(child) == Archive::Status::fresh;
                           });
        result.duplicate_padded = result.duplicate_padded || snap.duplicate_padded;
        result.generations.push_back(std::move(snap));
        population = std::move(next);
    }
    result.next_population = to_candidates(population, cfg.generations + 1);

    if (bai) {
        if (pool->size() < 2) {
            throw std::runtime_error("elite pool holds fewer than 2 candidates at the BAI phase");
        }
        BaiOutcome outcome;
        outcome.pool.assign(pool->entries().begin(), pool->entries().end());
        std::vector<Genome> designs;
        for (const auto& e : outcome.pool) {
            designs.push_back(e.genome);
        }
        SharedState shared;
        PopulationSource source(env, rng, designs);
        std::vector<ArmState> arms(designs.size());
        const PolicyOutcome sr = run_policy(Policy::sr, arms, shared, cfg.bai_traffic, source, rng);
        const std::size_t w = *sr.recommendation;
        outcome.winner = designs[w];
        outcome.winner_fitness = arms[w].empirical_mean();
        outcome.arms = std::move(arms);
        outcome.conversions = source.conversions();
        outcome.visits = source.visits();
        result.bai = std::move(outcome);
    }
    return result;
}

}  // namespace

RunResult run_mab_ea(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng) {
    if (cfg.mode != Mode::mab_ea) throw std::invalid_argument("run_mab_ea: mode must be mab_ea");
    return run_archived(cfg, env, rng);
}

RunResult run_bai_mode(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng) {
    if (cfg.mode != Mode::bai) throw std::invalid_argument("run_bai_mode: mode must be bai");
    return run_archived(cfg, env, rng);
}

RunResult run_neighborhood(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng) {
    if (cfg.mode != Mode::neighborhood) {
        throw std::invalid_argument("run_neighborhood: mode must be neighborhood");
    }
    return run_archived(cfg, env, rng);
}

RunResult run_campaign(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng) {
    if (cfg.mode != Mode::campaign) throw std::invalid_argument("run_campaign: mode must be campaign");
    cfg.validate();
    const SearchSpace& space = env.space();
    const std::size_t K = cfg.population_size;
    const std::size_t parent_count = parent_pool_size(cfg);
    const std::size_t replace_count = percentile_count(K, cfg.parent_percent);

    RunResult result;
    bool padded = false;
    std::vector<Candidate> population = to_candidates(initial_population(cfg, space, rng, padded), 1);
    result.duplicate_padded = padded;
    SharedState shared;

    for (std::size_t g = 1; g <= cfg.generations; ++g) {
        if (!cfg.asynchronous) {
            shared = {};
            for (auto& c : population) {
                c.arm.reset();
            }
        }
        std::vector<ArmState> arms;
        arms.reserve(K);
        for (const auto& c : population) {
            arms.push_back(c.arm);
        }
        const auto designs = genomes_of(population);
        Evaluation eval = evaluate(cfg.policy, designs, std::move(arms), shared,
                                   cfg.traffic_per_generation, env, rng);

        GenerationSnapshot snap;
        snap.generation = g;
        snap.conversions = eval.conversions;
        snap.visits = eval.visits;
        snap.fitness.resize(K);
        for (std::size_t i = 0; i < K; ++i) {
            population[i].arm = eval.arms[i];
            snap.fitness[i] = eval.arms[i].empirical_mean();
        }
        snap.population = population;

        const auto order = rank_descending(snap.fitness);
        std::vector<Genome> parents;
        std::vector<double> parent_fitness;
        for (std::size_t r = 0; r < std::min(parent_count, K); ++r) {
            parents.push_back(population[order[r]].genome);
            parent_fitness.push_back(snap.fitness[order[r]]);
        }

        // Worst first; among equals the younger candidate, then the later
        // position, goes first.
        std::vector<std::size_t> removal(K);
        std::iota(removal.begin(), removal.end(), std::size_t{0});
        std::sort(removal.begin(), removal.end(), [&](std::size_t a, std::size_t b) {
            if (snap.fitness[a] != snap.fitness[b]) return snap.fitness[a] < snap.fitness[b];
            if (population[a].birth_generation != population[b].birth_generation) {
                return population[a].birth_generation > population[b].birth_generation;
            }
            return a > b;
        });
        std::vector<bool> removed(K, false);
        for (std::size_t r = 0; r < replace_count; ++r) {
            removed[removal[r]] = true;
        }
        std::vector<Candidate> survivors;
        for (std::size_t i = 0; i < K; ++i) {
            if (!removed[i]) {
                survivors.push_back(std::move(population[i]));
            }
        }

        std::set<Genome> present;
        for (const auto& c : survivors) {
            present.insert(c.genome);
        }
        std::vector<Genome> offspring;
        snap.duplicate_padded = fill_offspring(
            offspring, K - survivors.size(), parents, parent_fitness, cfg, space, rng,
            [&](const Genome& child) { return present.insert(child).second; });
        result.duplicate_padded = result.duplicate_padded || snap.duplicate_padded;
        for (auto& child : offspring) {
            survivors.push_back({std::move(child), ArmState{}, g + 1});
        }
        result.generations.push_back(std::move(snap));
        population = std::move(survivors);
    }
    result.next_population = std::move(population);
    return result;
}

RunResult run_evolution(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng) {
    switch (cfg.mode) {
        case Mode::mab_ea: return run_mab_ea(cfg, env, rng);
        case Mode::bai: return run_bai_mode(cfg, env, rng);
        case Mode::campaign: return run_campaign(cfg, env, rng);
        case Mode::neighborhood: return run_neighborhood(cfg, env, rng);
    }
    throw std::invalid_argument("unknown mode");
}

}  // namespace mabea
