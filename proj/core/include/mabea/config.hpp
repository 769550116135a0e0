#pragma once

/// @file config.hpp
/// @brief JSON experiment files.
///
/// ```json
/// {
///   "mode": "mab_ea", "policy": "ts",
///   "population_size": 20, "generations": 10, "traffic_per_generation": 10000,
///   "elite_percent": 20, "parent_percent": 20, "mutation_prob": 0.01,
///   "bai_elite_size": 20, "bai_traffic": 10000, "neighborhood_size": 5,
///   "asynchronous": true,
///   "table": "table.json",
///   "replications": 100, "master_seed": 1, "threads": 0
/// }
/// ```
///
/// Instead of `"table"` a file may give `"table_generation": {"space": [...],
/// "base_rate": 0.05, "effect_range": [-0.01, 0.01], "seed": 7}`. An optional
/// top-level `"space"` must match the table's space. Relative table paths
/// resolve against the config file's directory. Omitted EvolutionConfig
/// fields keep their defaults.

#include <cstdint>
#include <filesystem>
#include <string>

#include "mabea/evolution.hpp"
#include "mabea/simulator.hpp"

namespace mabea {

struct ExperimentSpec {
    EvolutionConfig evolution;
    EffectTable table;
    std::size_t replications = 1;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;
};

/// Throws std::invalid_argument on malformed or inconsistent input.
[[nodiscard]] ExperimentSpec experiment_from_json(const std::string& text,
                                                  const std::filesystem::path& base_dir = {});
[[nodiscard]] ExperimentSpec load_experiment(const std::filesystem::path& path);

}  // namespace mabea
