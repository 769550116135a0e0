#include "mabea/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mabea {

namespace {

const std::set<std::string> kKnownKeys = {
    "mode",          "policy",         "population_size", "generations",
    "traffic_per_generation", "elite_percent", "parent_percent", "mutation_prob",
    "bai_elite_size", "bai_traffic",   "neighborhood_size", "asynchronous",
    "table",         "table_generation", "space",         "replications",
    "master_seed",   "threads"};

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

EvolutionConfig parse_evolution(const nlohmann::json& j) {
    EvolutionConfig cfg;
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("policy")) cfg.policy = parse_policy(j.at("policy").get<std::string>());
    read_opt(j, "population_size", cfg.population_size);
    read_opt(j, "generations", cfg.generations);
    read_opt(j, "traffic_per_generation", cfg.traffic_per_generation);
    read_opt(j, "elite_percent", cfg.elite_percent);
    read_opt(j, "parent_percent", cfg.parent_percent);
    read_opt(j, "mutation_prob", cfg.mutation_prob);
    read_opt(j, "bai_elite_size", cfg.bai_elite_size);
    read_opt(j, "bai_traffic", cfg.bai_traffic);
    read_opt(j, "neighborhood_size", cfg.neighborhood_size);
    read_opt(j, "asynchronous", cfg.asynchronous);
    return cfg;
}

EffectTable table_from_generation(const nlohmann::json& g) {
    const SearchSpace space(g.at("space").get<std::vector<Choice>>());
    const double base = g.value("base_rate", 0.05);
    auto range = g.value("effect_range", std::vector<double>{-0.01, 0.01});
    if (range.size() != 2) {
        throw std::invalid_argument("effect_range must have two entries");
    }
    return generate_table(space, base, range[0], range[1], g.value("seed", std::uint64_t{0}));
}

}  // namespace

ExperimentSpec experiment_from_json(const std::string& text, const std::filesystem::path& base_dir) {
    ExperimentSpec spec;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) {
            throw std::invalid_argument("experiment config must be a JSON object");
        }
        for (const auto& [key, value] : j.items()) {
            if (!kKnownKeys.contains(key)) {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        }
        spec.evolution = parse_evolution(j);
        read_opt(j, "replications", spec.replications);
        read_opt(j, "master_seed", spec.master_seed);
        read_opt(j, "threads", spec.threads);

        const bool has_path = j.contains("table");
        const bool has_gen = j.contains("table_generation");
        if (has_path == has_gen) {
            throw std::invalid_argument("config needs exactly one of 'table' or 'table_generation'");
        }
        if (has_path) {
            std::filesystem::path p = j.at("table").get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            spec.table = load_table(p);
        } else {
            spec.table = table_from_generation(j.at("table_generation"));
        }
        if (j.contains("space")) {
            const SearchSpace declared(j.at("space").get<std::vector<Choice>>());
            if (!(declared == spec.table.space)) {
                throw std::invalid_argument("config space does not match the effect table");
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("malformed experiment config: ") + ex.what());
    }
    if (spec.replications == 0) {
        throw std::invalid_argument("replications must be at least 1");
    }
    spec.evolution.validate();
    spec.table.validate();
    return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return experiment_from_json(buf.str(), path.parent_path());
}

}  // namespace mabea
