#pragma once

/// @file compare.hpp
/// @brief Per-generation Welch comparison of two experiments.

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mabea/experiment.hpp"

namespace mabea {

enum class Metric { best_true_cr, overall_cr, cumulative_cr };

inline constexpr std::array kAllMetrics = {Metric::best_true_cr, Metric::overall_cr,
                                           Metric::cumulative_cr};
inline constexpr double kSignificanceLevel = 0.05;

[[nodiscard]] std::string_view to_string(Metric metric);
[[nodiscard]] double metric_value(const GenerationRecord& record, Metric metric);

struct ComparisonRow {
    std::size_t generation = 0;
    Metric metric = Metric::overall_cr;
    double mean_a = 0.0;
    double se_a = 0.0;
    double mean_b = 0.0;
    double se_b = 0.0;
    double t = 0.0;
    double p = 1.0;
    bool significant = false;  // p < 0.05
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;

    /// Throws std::out_of_range when the pair is absent.
    [[nodiscard]] const ComparisonRow& at(std::size_t generation, Metric metric) const;
    [[nodiscard]] std::vector<std::size_t> generations() const;
};

/// Values of `metric` at `generation`, one per run, in record order.
[[nodiscard]] std::vector<double> metric_sample(std::span<const GenerationRecord> records,
                                                std::size_t generation, Metric metric);

/// Tests A against B at every generation on every metric. Both sides must
/// cover the same generations. When both samples are constant the test is
/// degenerate: equal means give t = 0, p = 1, different means give
/// t = +/-inf, p = 0.
[[nodiscard]] ComparisonReport compare(std::span<const GenerationRecord> a,
                                       std::span<const GenerationRecord> b);

inline constexpr const char* kReportHeader =
    "generation,metric,mean_a,se_a,mean_b,se_b,t,p,significant";

void write_report_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace mabea
