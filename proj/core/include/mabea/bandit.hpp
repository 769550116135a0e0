#pragma once

/// @file bandit.hpp
/// @brief Bernoulli bandit policies: uniform round-robin, UCB1, Thompson
/// Sampling and Successive Rejects.
///
/// Policies never own arm statistics. Callers pass a span of `ArmState` and a
/// `SharedState`; zeroing them before a call gives the classic (synchronous)
/// algorithm, passing carried-over counters gives the asynchronous variant.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mabea/rng.hpp"

namespace mabea {

/// Conversion/visit counters for one arm.
class ArmState {
public:
    ArmState() = default;
    ArmState(std::uint64_t successes, std::uint64_t failures)
        : successes_(successes), failures_(failures) {}

    [[nodiscard]] std::uint64_t successes() const { return successes_; }
    [[nodiscard]] std::uint64_t failures() const { return failures_; }
    [[nodiscard]] std::uint64_t pulls() const { return successes_ + failures_; }

    /// S / n, or 0 for an arm that was never pulled.
    [[nodiscard]] double empirical_mean() const {
        const auto n = pulls();
        return n == 0 ? 0.0 : static_cast<double>(successes_) / static_cast<double>(n);
    }

    void record(bool converted) { converted ? ++successes_ : ++failures_; }
    void reset() { successes_ = failures_ = 0; }

    friend bool operator==(const ArmState&, const ArmState&) = default;

private:
    std::uint64_t successes_ = 0;
    std::uint64_t failures_ = 0;
};

/// Round counter shared by every arm of one policy instance (UCB1's t).
struct SharedState {
    std::uint64_t total_pulls = 0;
    friend bool operator==(const SharedState&, const SharedState&) = default;
};

/// Anything that answers "pull arm i" with a 0/1 reward.
class RewardSource {
public:
    virtual ~RewardSource() = default;
    virtual bool pull(std::size_t arm) = 0;
};

enum class Policy { uniform, ucb1, ts, sr };

[[nodiscard]] std::string_view to_string(Policy policy);
/// Throws std::invalid_argument on an unknown name.
[[nodiscard]] Policy parse_policy(std::string_view name);

/// Lowest-indexed unpulled arm if any, else argmax of mean + sqrt(2 ln t / n)
/// with t = shared.total_pulls. Ties go to the lowest index.
[[nodiscard]] std::size_t ucb1_select(std::span<const ArmState> arms, const SharedState& shared);

/// Draws theta_i ~ Beta(S_i + 1, F_i + 1) for every arm and returns the argmax.
[[nodiscard]] std::size_t ts_select(std::span<const ArmState> arms, Rng& rng);

void update(ArmState& arm, SharedState& shared, bool converted);

/// Cumulative per-arm pull targets n_1..n_{K-1} of Successive Rejects.
/// Requires K >= 2 and n >= K, throws std::invalid_argument otherwise.
[[nodiscard]] std::vector<std::uint64_t> sr_schedule(std::size_t arm_count, std::uint64_t budget);

struct SrResult {
    std::size_t recommended = 0;
    std::uint64_t pulls_used = 0;
    /// Arms active during the last phase, ascending (two arms for K >= 2).
    std::vector<std::size_t> final_phase_arms;
};

/// Runs Successive Rejects on top of whatever counters `arms` already hold.
/// Rejection ranks by the arms' empirical means; on a tie the highest index
/// is rejected.
SrResult sr_run(std::span<ArmState> arms, SharedState& shared, std::uint64_t budget,
                RewardSource& source);

/// Round-robin: arm i gets floor(n/K) pulls plus one if i < n mod K.
void uniform_allocate(std::span<ArmState> arms, SharedState& shared, std::uint64_t budget,
                      RewardSource& source);

struct PolicyOutcome {
    std::uint64_t pulls_used = 0;
    /// Pulls SR's schedule left over, redistributed round-robin to the
    /// final-phase arms. Always zero for the other policies.
    std::uint64_t sr_shortfall = 0;
    std::optional<std::size_t> recommendation;
};

/// Spends exactly `budget` pulls on `arms` under `policy`.
PolicyOutcome run_policy(Policy policy, std::span<ArmState> arms, SharedState& shared,
                         std::uint64_t budget, RewardSource& source, Rng& rng);

}  // namespace mabea
