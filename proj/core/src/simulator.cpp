#include "mabea/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mabea {

EffectTable EffectTable::identity(SearchSpace space, double base_rate) {
    EffectTable table;
    table.effects.reserve(space.size());
    for (const Choice c : space.choice_counts()) {
        table.effects.emplace_back(c, 0.0);
    }
    table.space = std::move(space);
    table.base_rate = base_rate;
    return table;
}

void EffectTable::validate() const {
    if (effects.size() != space.size()) {
        throw std::invalid_argument("effect table has " + std::to_string(effects.size()) +
                                    " elements, space has " + std::to_string(space.size()));
    }
    for (std::size_t e = 0; e < effects.size(); ++e) {
        if (effects[e].size() != space.choices(e)) {
            throw std::invalid_argument("effect row " + std::to_string(e) +
                                        " does not match the element's choice count");
        }
    }
    if (!(base_rate >= 0.0 && base_rate <= 1.0)) {
        throw std::invalid_argument("base rate outside [0, 1]");
    }
}

double true_rate(const Genome& g, const EffectTable& table) {
    if (g.size() != table.effects.size()) {
        throw std::invalid_argument("true_rate: genome does not match the effect table");
    }
    double rate = table.base_rate;
    for (std::size_t e = 0; e < g.size(); ++e) {
        const auto& row = table.effects[e];
        if (g[e] >= row.size()) {
            throw std::invalid_argument("true_rate: choice index out of range");
        }
        rate += row[g[e]];
    }
    return std::clamp(rate, 0.0, 1.0);
}

bool visit(const Genome& g, const EffectTable& table, Rng& rng) {
    return rng.bernoulli(true_rate(g, table));
}

EffectTable generate_table(const SearchSpace& space, double base_rate, double lo, double hi,
                           std::uint64_t seed) {
    if (lo > hi) {
        throw std::invalid_argument("generate_table: empty effect range");
    }
    Rng rng(seed);
    EffectTable table = EffectTable::identity(space, base_rate);
    for (auto& row : table.effects) {
        for (double& effect : row) {
            effect = rng.uniform(lo, hi);
        }
    }
    table.seed = seed;
    return table;
}

EnumerationSummary enumerate(const EffectTable& table, std::uint64_t limit) {
    table.validate();
    const std::uint64_t count = table.space.design_count();
    if (count > limit) {
        throw std::length_error("design space has " + std::to_string(count) +
                                " designs, above the enumeration limit of " +
                                std::to_string(limit) + "; estimate by sampling instead");
    }
    const std::size_t elements = table.space.size();
    std::vector<Choice> odometer(elements, 0);
    Genome current(odometer);

    EnumerationSummary summary;
    summary.design_count = count;
    summary.best_rate = -1.0;
    // Summing offsets from the base keeps a flat table's mean exact.
    double offset_total = 0.0;
    for (std::uint64_t d = 0; d < count; ++d) {
        const double rate = true_rate(current, table);
        offset_total += rate - table.base_rate;
        // Odometer order is lexicographic, so a strict > keeps the smallest tie.
        if (rate > summary.best_rate) {
            summary.best_rate = rate;
            summary.best_genome = current;
        }
        for (std::size_t e = elements; e-- > 0;) {
            if (++current[e] < table.space.choices(e)) {
                break;
            }
            current[e] = 0;
        }
    }
    summary.mean_rate = table.base_rate + offset_total / static_cast<double>(count);
    return summary;
}

std::string table_to_json(const EffectTable& table) {
    table.validate();
    nlohmann::json j;
    j["space"] = std::vector<Choice>(table.space.choice_counts().begin(),
                                     table.space.choice_counts().end());
    j["base_rate"] = table.base_rate;
    j["effects"] = table.effects;
    j["seed"] = table.seed;
    return j.dump(2) + "\n";
}

EffectTable table_from_json(const std::string& text) {
    EffectTable table;
    try {
        const auto j = nlohmann::json::parse(text);
        table.space = SearchSpace(j.at("space").get<std::vector<Choice>>());
        table.base_rate = j.at("base_rate").get<double>();
        table.effects = j.at("effects").get<std::vector<std::vector<double>>>();
        table.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("malformed table file: ") + ex.what());
    }
    table.validate();
    return table;
}

void save_table(const EffectTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << table_to_json(table);
}

EffectTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open table file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return table_from_json(buf.str());
}

}  // namespace mabea
