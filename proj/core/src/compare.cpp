#include "mabea/compare.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "mabea/stats.hpp"

namespace mabea {

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::best_true_cr: return "best_true_cr";
        case Metric::overall_cr: return "overall_cr";
        case Metric::cumulative_cr: return "cumulative_cr";
    }
    return "?";
}

double metric_value(const GenerationRecord& record, Metric metric) {
    switch (metric) {
        case Metric::best_true_cr: return record.best_true_cr;
        case Metric::overall_cr: return record.overall_cr;
        case Metric::cumulative_cr: return record.cumulative_cr;
    }
    return 0.0;
}

const ComparisonRow& ComparisonReport::at(std::size_t generation, Metric metric) const {
    for (const auto& row : rows) {
        if (row.generation == generation && row.metric == metric) {
            return row;
        }
    }
    throw std::out_of_range("no comparison row for generation " + std::to_string(generation));
}

std::vector<std::size_t> ComparisonReport::generations() const {
    std::set<std::size_t> gens;
    for (const auto& row : rows) gens.insert(row.generation);
    return {gens.begin(), gens.end()};
}

std::vector<double> metric_sample(std::span<const GenerationRecord> records,
                                  std::size_t generation, Metric metric) {
    std::vector<double> out;
    for (const auto& r : records) {
        if (r.generation == generation) {
            out.push_back(metric_value(r, metric));
        }
    }
    return out;
}

namespace {

std::set<std::size_t> generation_set(std::span<const GenerationRecord> records) {
    std::set<std::size_t> gens;
    for (const auto& r : records) gens.insert(r.generation);
    return gens;
}

}  // namespace

ComparisonReport compare(std::span<const GenerationRecord> a, std::span<const GenerationRecord> b) {
    const auto gens = generation_set(a);
    if (gens.empty() || gens != generation_set(b)) {
        throw std::invalid_argument("compare: experiments cover different generations");
    }
    ComparisonReport report;
    for (const std::size_t g : gens) {
        for (const Metric m : kAllMetrics) {
            const auto xa = metric_sample(a, g, m);
            const auto xb = metric_sample(b, g, m);
            if (xa.size() < 2 || xb.size() < 2) {
                throw std::invalid_argument("compare: need at least 2 runs per side");
            }
            const SampleSummary sa = summarize(xa);
            const SampleSummary sb = summarize(xb);
            ComparisonRow row;
            row.generation = g;
            row.metric = m;
            row.mean_a = sa.mean;
            row.se_a = sa.standard_error;
            row.mean_b = sb.mean;
            row.se_b = sb.standard_error;
            if (sa.variance > 0.0 || sb.variance > 0.0) {
                const TTestResult t = welch_t_test(xa, xb);
                row.t = t.t;
                row.p = t.p;
            } else if (sa.mean != sb.mean) {
                row.t = sa.mean > sb.mean ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
                row.p = 0.0;
            }
            row.significant = row.p < kSignificanceLevel;
            report.rows.push_back(row);
        }
    }
    return report;
}

void write_report_csv(std::ostream& out, const ComparisonReport& report) {
    out << kReportHeader << '\n';
    for (const auto& r : report.rows) {
        out << r.generation << ',' << to_string(r.metric) << ',' << format_double(r.mean_a) << ','
            << format_double(r.se_a) << ',' << format_double(r.mean_b) << ','
            << format_double(r.se_b) << ',' << format_double(r.t) << ',' << format_double(r.p)
            << ',' << (r.significant ? 1 : 0) << '\n';
    }
}

}  // namespace mabea
