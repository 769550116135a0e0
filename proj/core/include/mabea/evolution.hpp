#pragma once

/// @file evolution.hpp
/// @brief Evolutionary drivers whose per-generation traffic is allocated by a
/// bandit policy.
///
/// Four modes share one generational skeleton:
///
///  - `mab_ea`: arms are zeroed each generation, the top C_e% survive as
///    elites and offspring are never re-created once evaluated (archive).
///  - `bai`: like `mab_ea` but nobody survives; the top C_e% of every
///    generation feed a bounded elite pool that Successive Rejects screens
///    with extra traffic after the last generation.
///  - `campaign`: the worst C_p% are replaced each generation and survivors
///    keep their cumulative counters when `asynchronous` is set.
///  - `neighborhood`: `mab_ea` with candidates ranked by the mean fitness of
///    their Hamming-nearest evaluated designs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mabea/bandit.hpp"
#include "mabea/genome.hpp"
#include "mabea/rng.hpp"

namespace mabea {

enum class Mode { mab_ea, bai, campaign, neighborhood };

[[nodiscard]] std::string_view to_string(Mode mode);
[[nodiscard]] Mode parse_mode(std::string_view name);

struct EvolutionConfig {
    std::size_t population_size = 20;          // K
    std::size_t generations = 10;              // G_max
    std::uint64_t traffic_per_generation = 10'000;  // T
    double elite_percent = 20.0;               // C_e
    double parent_percent = 20.0;              // C_p
    double mutation_prob = 0.01;               // C_m
    Policy policy = Policy::ts;
    Mode mode = Mode::mab_ea;
    std::size_t bai_elite_size = 20;           // K_e
    std::uint64_t bai_traffic = 10'000;        // T_e
    std::size_t neighborhood_size = 5;
    /// Campaign mode only: carry survivors' counters across generations.
    bool asynchronous = true;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// Source of visitor outcomes for a design. The evolution never sees true
/// conversion rates, only these draws.
class DesignEnvironment {
public:
    virtual ~DesignEnvironment() = default;
    [[nodiscard]] virtual const SearchSpace& space() const = 0;
    virtual bool visit(const Genome& design, Rng& rng) = 0;
};

struct Candidate {
    Genome genome;
    ArmState arm;
    std::size_t birth_generation = 1;
};

struct GenerationSnapshot {
    std::size_t generation = 0;  // 1-based
    std::vector<Candidate> population;
    /// Ranking value per candidate: arm.empirical_mean(), except in
    /// neighborhood mode where it is the neighborhood estimate.
    std::vector<double> fitness;
    std::uint64_t conversions = 0;  // this generation only
    std::uint64_t visits = 0;
    bool duplicate_padded = false;  // offspring fill hit the rejection bound
};

struct EliteEntry {
    Genome genome;
    double fitness = 0.0;
    std::size_t generation = 0;
};

/// Bounded pool; overflow evicts the lowest recorded fitness, the most
/// recently added entry losing ties.
class ElitePool {
public:
    explicit ElitePool(std::size_t capacity);

    void add(EliteEntry entry);
    [[nodiscard]] std::span<const EliteEntry> entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::vector<EliteEntry> entries_;
};

struct BaiOutcome {
    Genome winner;
    /// Winner's empirical conversion rate within the BAI phase.
    double winner_fitness = 0.0;
    std::vector<EliteEntry> pool;
    std::vector<ArmState> arms;
    std::uint64_t conversions = 0;
    std::uint64_t visits = 0;
};

struct RunResult {
    std::vector<GenerationSnapshot> generations;
    /// Population built after the last generation; never evaluated.
    std::vector<Candidate> next_population;
    bool duplicate_padded = false;
    std::optional<BaiOutcome> bai;
};

/// ceil(K * C / 100), at least 1 and at most K.
[[nodiscard]] std::size_t percentile_count(std::size_t population, double percent);

/// Positions ordered best first; equal fitness keeps the lower position first.
[[nodiscard]] std::vector<std::size_t> rank_descending(std::span<const double> fitness);

struct EvaluatedDesign {
    Genome genome;
    double fitness = 0.0;
};

/// Mean fitness of the `k` evaluated designs nearest to `candidate` in
/// Hamming distance; earlier evaluations win distance ties. Uses every entry
/// when fewer than `k` exist.
[[nodiscard]] double neighborhood_fitness(const Genome& candidate,
                                          std::span<const EvaluatedDesign> evaluated,
                                          std::size_t k);

inline constexpr std::size_t kFillAttemptsPerSlot = 100;

RunResult run_mab_ea(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng);
RunResult run_bai_mode(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng);
RunResult run_campaign(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng);
RunResult run_neighborhood(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng);

/// Dispatches on cfg.mode.
RunResult run_evolution(const EvolutionConfig& cfg, DesignEnvironment& env, Rng& rng);

}  // namespace mabea
