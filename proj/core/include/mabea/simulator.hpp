#pragma once

/// @file simulator.hpp
/// @brief Synthetic website traffic with additive per-choice effects.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mabea/genome.hpp"
#include "mabea/rng.hpp"

namespace mabea {

/// Ground truth: conversion rate = clamp(base + sum of chosen effects, 0, 1).
struct EffectTable {
    SearchSpace space;
    double base_rate = 0.05;
    /// effects[e][c]: delta contributed by choice c of element e.
    std::vector<std::vector<double>> effects;
    /// Seed the table was generated from (0 for hand-built tables).
    std::uint64_t seed = 0;

    /// All-zero effects over `space`.
    [[nodiscard]] static EffectTable identity(SearchSpace space, double base_rate = 0.05);

    /// Throws std::invalid_argument if the effect matrix does not match the space.
    void validate() const;

    friend bool operator==(const EffectTable&, const EffectTable&) = default;
};

[[nodiscard]] double true_rate(const Genome& g, const EffectTable& table);

/// One simulated visitor: converts with probability true_rate(g).
[[nodiscard]] bool visit(const Genome& g, const EffectTable& table, Rng& rng);

/// Effects drawn independently and uniformly from [lo, hi].
[[nodiscard]] EffectTable generate_table(const SearchSpace& space, double base_rate, double lo,
                                         double hi, std::uint64_t seed);

struct EnumerationSummary {
    std::uint64_t design_count = 0;
    double mean_rate = 0.0;
    double best_rate = 0.0;
    Genome best_genome;
};

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// Exhaustive scan of every design. Ties for the best design resolve to the
/// lexicographically smallest genome. Throws std::length_error above
/// `limit` designs.
[[nodiscard]] EnumerationSummary enumerate(const EffectTable& table,
                                           std::uint64_t limit = kEnumerationLimit);

/// JSON text with space, base_rate, effects and seed. Doubles are written in
/// shortest round-trip form so load(save(t)) == t bit for bit.
[[nodiscard]] std::string table_to_json(const EffectTable& table);
[[nodiscard]] EffectTable table_from_json(const std::string& text);
void save_table(const EffectTable& table, const std::filesystem::path& path);
[[nodiscard]] EffectTable load_table(const std::filesystem::path& path);

}  // namespace mabea
