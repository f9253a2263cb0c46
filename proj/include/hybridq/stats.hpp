#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace hybridq {

// Welford accumulator; merge uses the pairwise-combination update so
// per-replication results can be reduced in a fixed order.
struct RunningStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& other) {
        if (other.n == 0) return;
        if (n == 0) {
            *this = other;
            return;
        }
        const double d = other.mean - mean;
        const auto total = n + other.n;
        mean += d * static_cast<double>(other.n) / static_cast<double>(total);
        m2 += other.m2 +
              d * d * static_cast<double>(n) * static_cast<double>(other.n) /
                  static_cast<double>(total);
        n = total;
    }

    double sample_variance() const {
        return n > 1 ? m2 / static_cast<double>(n - 1)
                     : std::numeric_limits<double>::quiet_NaN();
    }
};

inline double student_t_975(int dof) {
    return boost::math::quantile(boost::math::students_t(static_cast<double>(dof)), 0.975);
}

// Per-request delay statistics. mean/variance/count pool every post-warmup
// request; the 95% half-width is computed across replication means
// (Student-t, replications-1 dof). NaN half-width for a single replication.
struct DelayStats {
    double mean = 0.0;      // s
    double variance = 0.0;  // s^2
    std::int64_t count = 0;
    double ci_halfwidth_95 = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> rep_means;
};

inline DelayStats finalize_replications(const std::vector<RunningStats>& reps) {
    DelayStats out;
    RunningStats pooled;
    out.rep_means.reserve(reps.size());
    for (const auto& r : reps) {
        pooled.merge(r);
        out.rep_means.push_back(r.mean);
    }
    out.mean = pooled.mean;
    out.variance = pooled.sample_variance();
    out.count = pooled.n;
    const auto k = reps.size();
    if (k >= 2) {
        RunningStats over_means;
        for (double m : out.rep_means) over_means.add(m);
        out.ci_halfwidth_95 = student_t_975(static_cast<int>(k) - 1) *
                              std::sqrt(over_means.sample_variance() / static_cast<double>(k));
    }
    return out;
}

// t-based 95% half-width of a plain sample (used for replication-level
// derived metrics such as the per-cell penalty).
inline double ci_halfwidth_95(const std::vector<double>& sample) {
    if (sample.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    RunningStats s;
    for (double x : sample) s.add(x);
    return student_t_975(static_cast<int>(sample.size()) - 1) *
           std::sqrt(s.sample_variance() / static_cast<double>(sample.size()));
}

}  // namespace hybridq
