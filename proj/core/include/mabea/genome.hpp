#pragma once

/// @file genome.hpp
/// @brief Categorical design encoding and the evolutionary operators.

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "mabea/rng.hpp"

namespace mabea {

using Choice = std::uint32_t;

/// Number of choices per design element.
class SearchSpace {
public:
    SearchSpace() = default;
    /// Throws std::invalid_argument if the list is empty or any count is zero.
    explicit SearchSpace(std::vector<Choice> choice_counts);

    [[nodiscard]] std::size_t size() const { return counts_.size(); }
    [[nodiscard]] Choice choices(std::size_t element) const { return counts_[element]; }
    [[nodiscard]] std::span<const Choice> choice_counts() const { return counts_; }
    /// Product of the choice counts, saturating at UINT64_MAX.
    [[nodiscard]] std::uint64_t design_count() const;

    friend bool operator==(const SearchSpace&, const SearchSpace&) = default;

private:
    std::vector<Choice> counts_;
};

/// The 8-element landing page used throughout the experiments.
[[nodiscard]] SearchSpace reference_space();

/// One design: a choice index per element.
class Genome {
public:
    Genome() = default;
    explicit Genome(std::vector<Choice> choices) : choices_(std::move(choices)) {}

    [[nodiscard]] std::size_t size() const { return choices_.size(); }
    [[nodiscard]] Choice operator[](std::size_t e) const { return choices_[e]; }
    Choice& operator[](std::size_t e) { return choices_[e]; }
    [[nodiscard]] std::span<const Choice> choices() const { return choices_; }

    [[nodiscard]] bool fits(const SearchSpace& space) const;

    friend bool operator==(const Genome&, const Genome&) = default;
    friend auto operator<=>(const Genome&, const Genome&) = default;

private:
    std::vector<Choice> choices_;
};

/// Throws std::invalid_argument unless `g` is a valid genome of `space`.
void require_fits(const Genome& g, const SearchSpace& space);

[[nodiscard]] Genome random_genome(const SearchSpace& space, Rng& rng);

/// Element-wise coin flip between the parents.
[[nodiscard]] Genome uniform_crossover(const Genome& p1, const Genome& p2, Rng& rng);

/// Each element independently moves, with probability `rate`, to a uniformly
/// drawn *different* choice. Single-choice elements never change.
[[nodiscard]] Genome mutate(const Genome& g, const SearchSpace& space, double rate, Rng& rng);

/// Two distinct positions drawn fitness-proportionately without replacement.
/// A zero-mass draw falls back to uniform over the remaining positions.
[[nodiscard]] std::pair<std::size_t, std::size_t> fitness_proportionate_select(
    std::span<const double> fitness, Rng& rng);

/// Exact set of genomes seen so far.
class Archive {
public:
    enum class Status { fresh, duplicate };

    Status check_insert(const Genome& g) {
        return seen_.insert(g).second ? Status::fresh : Status::duplicate;
    }
    [[nodiscard]] bool contains(const Genome& g) const { return seen_.contains(g); }
    [[nodiscard]] std::size_t size() const { return seen_.size(); }

private:
    std::set<Genome> seen_;
};

[[nodiscard]] std::size_t hamming_distance(const Genome& a, const Genome& b);

}  // namespace mabea
