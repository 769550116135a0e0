#include "mabea/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace mabea {

SampleSummary summarize(std::span<const double> sample) {
    SampleSummary s;
    s.n = sample.size();
    if (s.n == 0) {
        return s;
    }
    double sum = 0.0;
    for (const double x : sample) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (const double x : sample) ss += (x - s.mean) * (x - s.mean);
        s.variance = ss / static_cast<double>(s.n - 1);
        s.standard_error = std::sqrt(s.variance / static_cast<double>(s.n));
    }
    return s;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::domain_error("welch_t_test: each sample needs at least two values");
    }
    const SampleSummary sa = summarize(a);
    const SampleSummary sb = summarize(b);
    const double va = sa.variance / static_cast<double>(sa.n);
    const double vb = sb.variance / static_cast<double>(sb.n);
    const double pooled = va + vb;
    if (!(pooled > 0.0)) {
        throw std::domain_error("welch_t_test: both samples have zero variance");
    }
    TTestResult r;
    r.t = (sa.mean - sb.mean) / std::sqrt(pooled);
    r.df = pooled * pooled /
           (va * va / static_cast<double>(sa.n - 1) + vb * vb / static_cast<double>(sb.n - 1));
    const boost::math::students_t dist(r.df);
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    if (r.p > 1.0) r.p = 1.0;
    return r;
}

}  // namespace mabea
