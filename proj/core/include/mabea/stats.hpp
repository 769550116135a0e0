#pragma once

#include <cstddef>
#include <span>

namespace mabea {

struct SampleSummary {
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n - 1)
    double standard_error = 0.0;
    std::size_t n = 0;
};

[[nodiscard]] SampleSummary summarize(std::span<const double> sample);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;  // two-sided
    double df = 0.0;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Throws std::domain_error when a sample has fewer than two values
/// or both samples have zero variance.
[[nodiscard]] TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace mabea
