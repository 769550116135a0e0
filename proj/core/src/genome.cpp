#include "mabea/genome.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mabea {

SearchSpace::SearchSpace(std::vector<Choice> choice_counts) : counts_(std::move(choice_counts)) {
    if (counts_.empty()) {
        throw std::invalid_argument("search space needs at least one element");
    }
    for (std::size_t e = 0; e < counts_.size(); ++e) {
        if (counts_[e] == 0) {
            throw std::invalid_argument("element " + std::to_string(e) + " has no choices");
        }
    }
}

std::uint64_t SearchSpace::design_count() const {
    std::uint64_t total = 1;
    for (const Choice c : counts_) {
        if (total > std::numeric_limits<std::uint64_t>::max() / c) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total *= c;
    }
    return total;
}

SearchSpace reference_space() { return SearchSpace({5, 4, 2, 3, 4, 3, 3, 4}); }

bool Genome::fits(const SearchSpace& space) const {
    if (choices_.size() != space.size()) {
        return false;
    }
    for (std::size_t e = 0; e < choices_.size(); ++e) {
        if (choices_[e] >= space.choices(e)) {
            return false;
        }
    }
    return true;
}

void require_fits(const Genome& g, const SearchSpace& space) {
    if (!g.fits(space)) {
        throw std::invalid_argument("genome does not match the search space");
    }
}

Genome random_genome(const SearchSpace& space, Rng& rng) {
    std::vector<Choice> choices(space.size());
    for (std::size_t e = 0; e < choices.size(); ++e) {
        choices[e] = static_cast<Choice>(rng.below(space.choices(e)));
    }
    return Genome(std::move(choices));
}

Genome uniform_crossover(const Genome& p1, const Genome& p2, Rng& rng) {
    if (p1.size() != p2.size()) {
        throw std::invalid_argument("uniform_crossover: parents have different lengths");
    }
    Genome child = p1;
    for (std::size_t e = 0; e < child.size(); ++e) {
        if (rng.below(2) == 1) {
            child[e] = p2[e];
        }
    }
    return child;
}

Genome mutate(const Genome& g, const SearchSpace& space, double rate, Rng& rng) {
    require_fits(g, space);
    if (rate < 0.0 || rate > 1.0) {
        throw std::invalid_argument("mutate: rate outside [0, 1]");
    }
    Genome out = g;
    for (std::size_t e = 0; e < out.size(); ++e) {
        const Choice count = space.choices(e);
        if (count < 2 || !rng.bernoulli(rate)) {
            continue;
        }
        // Draw from the count-1 other values by skipping over the current one.
        auto pick = static_cast<Choice>(rng.below(count - 1));
        if (pick >= out[e]) {
            ++pick;
        }
        out[e] = pick;
    }
    return out;
}

namespace {

std::size_t draw_one(std::span<const double> fitness, std::size_t excluded, Rng& rng) {
    const std::size_t n = fitness.size();
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != excluded) {
            mass += fitness[i];
        }
    }
    const std::size_t eligible = excluded < n ? n - 1 : n;
    if (!(mass > 0.0)) {
        auto k = static_cast<std::size_t>(rng.below(eligible));
        if (excluded < n && k >= excluded) {
            ++k;
        }
        return k;
    }
    const double target = rng.uniform01() * mass;
    double acc = 0.0;
    std::size_t last_positive = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == excluded || fitness[i] <= 0.0) {
            continue;
        }
        acc += fitness[i];
        last_positive = i;
        if (target < acc) {
            return i;
        }
    }
    // Rounding left target at the very top of the mass.
    return last_positive;
}

}  // namespace

std::pair<std::size_t, std::size_t> fitness_proportionate_select(std::span<const double> fitness,
                                                                 Rng& rng) {
    if (fitness.size() < 2) {
        throw std::invalid_argument("fitness_proportionate_select: pool needs 2 members");
    }
    for (const double f : fitness) {
        if (!(f >= 0.0)) {
            throw std::invalid_argument("fitness_proportionate_select: negative fitness");
        }
    }
    const std::size_t first = draw_one(fitness, fitness.size(), rng);
    const std::size_t second = draw_one(fitness, first, rng);
    return {first, second};
}

std::size_t hamming_distance(const Genome& a, const Genome& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t e = 0; e < a.size(); ++e) {
        d += a[e] != b[e] ? 1 : 0;
    }
    return d;
}

}  // namespace mabea
