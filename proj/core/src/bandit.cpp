#include "mabea/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mabea {

std::string_view to_string(Policy policy) {
    switch (policy) {
        case Policy::uniform: return "uniform";
        case Policy::ucb1: return "ucb1";
        case Policy::ts: return "ts";
        case Policy::sr: return "sr";
    }
    return "?";
}

Policy parse_policy(std::string_view name) {
    if (name == "uniform") return Policy::uniform;
    if (name == "ucb1") return Policy::ucb1;
    if (name == "ts") return Policy::ts;
    if (name == "sr") return Policy::sr;
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::size_t ucb1_select(std::span<const ArmState> arms, const SharedState& shared) {
    if (arms.empty()) {
        throw std::invalid_argument("ucb1_select: no arms");
    }
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (arms[i].pulls() == 0) {
            return i;
        }
    }
    const double two_log_t = 2.0 * std::log(static_cast<double>(shared.total_pulls));
    std::size_t best = 0;
    double best_index = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const double n = static_cast<double>(arms[i].pulls());
        const double index = arms[i].empirical_mean() + std::sqrt(two_log_t / n);
        if (index > best_index) {
            best_index = index;
            best = i;
        }
    }
    return best;
}

std::size_t ts_select(std::span<const ArmState> arms, Rng& rng) {
    if (arms.empty()) {
        throw std::invalid_argument("ts_select: no arms");
    }
    std::size_t best = 0;
    double best_theta = -1.0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const double theta = rng.beta(static_cast<double>(arms[i].successes()) + 1.0,
                                      static_cast<double>(arms[i].failures()) + 1.0);
        if (theta > best_theta) {
            best_theta = theta;
            best = i;
        }
    }
    return best;
}

void update(ArmState& arm, SharedState& shared, bool converted) {
    arm.record(converted);
    ++shared.total_pulls;
}

std::vector<std::uint64_t> sr_schedule(std::size_t arm_count, std::uint64_t budget) {
    if (arm_count < 2) {
        throw std::invalid_argument("sr_schedule: need at least 2 arms");
    }
    if (budget < arm_count) {
        throw std::invalid_argument("sr_schedule: budget " + std::to_string(budget) +
                                    " is smaller than the arm count " +
                                    std::to_string(arm_count));
    }
    double log_bar = 0.5;
    for (std::size_t i = 2; i <= arm_count; ++i) {
        log_bar += 1.0 / static_cast<double>(i);
    }
    const double spare = static_cast<double>(budget - arm_count);
    std::vector<std::uint64_t> targets;
    targets.reserve(arm_count - 1);
    for (std::size_t k = 1; k < arm_count; ++k) {
        const double x = spare / (log_bar * static_cast<double>(arm_count + 1 - k));
        // Guard against x landing a few ulps above an exact integer.
        const double target = std::ceil(x - 1e-9 * std::max(1.0, x));
        targets.push_back(static_cast<std::uint64_t>(std::max(0.0, target)));
    }
    return targets;
}

SrResult sr_run(std::span<ArmState> arms, SharedState& shared, std::uint64_t budget,
                RewardSource& source) {
    const auto targets = sr_schedule(arms.size(), budget);
    std::vector<std::size_t> active(arms.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        active[i] = i;
    }

    SrResult result;
    std::uint64_t previous = 0;
    for (const std::uint64_t target : targets) {
        const std::uint64_t step = target - previous;
        previous = target;
        for (const std::size_t arm : active) {
            for (std::uint64_t r = 0; r < step; ++r) {
                update(arms[arm], shared, source.pull(arm));
            }
            result.pulls_used += step;
        }
        if (active.size() == 2) {
            result.final_phase_arms = active;
        }
        // Lowest empirical mean is rejected; scanning upward with <= makes the
        // highest index lose ties.
        std::size_t worst = 0;
        for (std::size_t j = 1; j < active.size(); ++j) {
            if (arms[active[j]].empirical_mean() <= arms[active[worst]].empirical_mean()) {
                worst = j;
            }
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    result.recommended = active.front();
    return result;
}

void uniform_allocate(std::span<ArmState> arms, SharedState& shared, std::uint64_t budget,
                      RewardSource& source) {
    if (arms.empty()) {
        if (budget == 0) return;
        throw std::invalid_argument("uniform_allocate: no arms");
    }
    std::size_t arm = 0;
    for (std::uint64_t r = 0; r < budget; ++r) {
        update(arms[arm], shared, source.pull(arm));
        if (++arm == arms.size()) {
            arm = 0;
        }
    }
}

PolicyOutcome run_policy(Policy policy, std::span<ArmState> arms, SharedState& shared,
                         std::uint64_t budget, RewardSource& source, Rng& rng) {
    PolicyOutcome outcome;
    switch (policy) {
        case Policy::uniform:
            uniform_allocate(arms, shared, budget, source);
            outcome.pulls_used = budget;
            break;
        case Policy::ucb1:
            for (std::uint64_t r = 0; r < budget; ++r) {
                const std::size_t arm = ucb1_select(arms, shared);
                update(arms[arm], shared, source.pull(arm));
            }
            outcome.pulls_used = budget;
            break;
        case Policy::ts:
            for (std::uint64_t r = 0; r < budget; ++r) {
                const std::size_t arm = ts_select(arms, rng);
                update(arms[arm], shared, source.pull(arm));
            }
            outcome.pulls_used = budget;
            break;
        case Policy::sr: {
            const SrResult sr = sr_run(arms, shared, budget, source);
            outcome.recommendation = sr.recommended;
            outcome.sr_shortfall = budget - sr.pulls_used;
            const auto& tail = sr.final_phase_arms;
            for (std::uint64_t r = 0; r < outcome.sr_shortfall; ++r) {
                const std::size_t arm = tail[r % tail.size()];
                update(arms[arm], shared, source.pull(arm));
            }
            outcome.pulls_used = budget;
            break;
        }
    }
    return outcome;
}

}  // namespace mabea
