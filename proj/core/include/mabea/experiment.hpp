#pragma once

/// @file experiment.hpp
/// @brief Seeded multi-replication runs over a simulated effect table and the
/// per-generation records they emit.
///
/// Replication r of an experiment seeded with M runs on
/// `Rng(derive_seed(M, r))`, so results depend only on (config, table, M, r)
/// and never on thread scheduling.
///
/// BAI-mode runs emit one extra record at generation G_max + 1 for the
/// best-arm-identification phase: its best_true_cr is the winner's true
/// rate and its overall_cr covers the T_e phase traffic.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mabea/evolution.hpp"
#include "mabea/simulator.hpp"

namespace mabea {

struct GenerationRecord {
    std::uint64_t run_id = 0;
    std::size_t generation = 0;
    double best_true_cr = 0.0;
    double overall_cr = 0.0;
    double cumulative_cr = 0.0;

    friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

/// Visits drawn from an effect table.
class TableEnvironment final : public DesignEnvironment {
public:
    explicit TableEnvironment(const EffectTable& table) : table_(table) {}
    [[nodiscard]] const SearchSpace& space() const override { return table_.space; }
    bool visit(const Genome& design, Rng& rng) override { return mabea::visit(design, table_, rng); }

private:
    const EffectTable& table_;
};

/// True rate of the candidate with the highest measured fitness (lowest
/// position on ties).
[[nodiscard]] double best_true_cr(const GenerationSnapshot& snapshot, const EffectTable& table);

[[nodiscard]] std::vector<GenerationRecord> records_for_run(const RunResult& run,
                                                            const EffectTable& table,
                                                            std::uint64_t run_id);

/// Runs replication `index` of an experiment seeded with `master_seed`.
[[nodiscard]] RunResult run_replication(const EvolutionConfig& cfg, const EffectTable& table,
                                        std::uint64_t master_seed, std::uint64_t index);

/// Records ordered by run_id then generation. `threads == 0` uses the
/// hardware concurrency. Validates config and table before any run starts.
[[nodiscard]] std::vector<GenerationRecord> run_experiment(const EvolutionConfig& cfg,
                                                           const EffectTable& table,
                                                           std::size_t replications,
                                                           std::uint64_t master_seed,
                                                           unsigned threads = 0);

inline constexpr const char* kRecordsHeader =
    "run_id,generation,best_true_cr,overall_cr,cumulative_cr";

/// Header plus one row per record; doubles in shortest round-trip form.
void write_records_csv(std::ostream& out, std::span<const GenerationRecord> records);
[[nodiscard]] std::string records_to_csv(std::span<const GenerationRecord> records);
/// Throws std::invalid_argument on a malformed header or row.
[[nodiscard]] std::vector<GenerationRecord> read_records_csv(std::istream& in);
[[nodiscard]] std::vector<GenerationRecord> records_from_csv(const std::string& text);

/// Shortest decimal text that parses back to exactly `x`.
[[nodiscard]] std::string format_double(double x);

}  // namespace mabea
