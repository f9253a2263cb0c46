#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "hybridq/analytic.hpp"
#include "hybridq/model.hpp"
#include "hybridq/sim.hpp"

namespace hybridq {

enum class SweepMetric { ApproxPenaltyPercent, AggOverNonAggRatio };
enum class SweepParam { Lambda, Mu, B1, B2 };

inline const char* metric_name(SweepMetric m) {
    return m == SweepMetric::ApproxPenaltyPercent ? "approx_penalty_percent"
                                                  : "agg_over_nonagg_ratio";
}

inline const char* param_name(SweepParam p) {
    switch (p) {
        case SweepParam::Lambda: return "lambda";
        case SweepParam::Mu: return "mu";
        case SweepParam::B1: return "b1";
        case SweepParam::B2: return "b2";
    }
    return "?";
}

struct BaseScenario {
    double lambda = 0.5;  // 1/s
    double mu = 90.0;     // Mb
    double b1 = 50.0;     // Mb/s
    double b2 = 100.0;    // Mb/s
};

// Grids bracketing the base point; chosen so every cell stays feasible for
// small n while covering the reported penalty minima.
inline std::vector<double> default_grid(SweepParam p) {
    auto grid = [](double lo, double hi, double step) {
        std::vector<double> v;
        for (double x = lo; x < hi + step / 2; x += step) v.push_back(x);
        return v;
    };
    switch (p) {
        case SweepParam::Lambda: return grid(0.1, 1.0, 0.1);
        case SweepParam::Mu: return grid(30.0, 120.0, 10.0);
        case SweepParam::B1: return grid(10.0, 90.0, 10.0);  // kept < b2
        case SweepParam::B2: return grid(60.0, 200.0, 20.0);
    }
    return {};
}

inline std::vector<int> default_n_values() {
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

struct SweepSpec {
    SweepMetric metric = SweepMetric::ApproxPenaltyPercent;
    SweepParam varied = SweepParam::Lambda;
    BaseScenario base;
    std::vector<double> values;  // defaults to default_grid(varied) when empty
    std::vector<int> n_values;   // defaults to 1..10 when empty
    RunConfig run;
    double search_tolerance = 1e-3;
};

struct SweepRow {
    double varied_value;
    int n;
    double value;         // metric value; NaN when skipped
    double ci_halfwidth;  // NaN when skipped or single replication
    bool skipped;         // cell failed validate_params
};

namespace detail {

inline SystemParams cell_raw(const BaseScenario& b, SweepParam varied, double value, int n) {
    SystemParams p{b.lambda, b.mu, b.b1, b.b2, n};
    switch (varied) {
        case SweepParam::Lambda: p.lambda = value; break;
        case SweepParam::Mu: p.mu = value; break;
        case SweepParam::B1: p.b1 = value; break;
        case SweepParam::B2: p.b2 = value; break;
    }
    return p;
}

inline SweepRow skipped_row(double value, int n) {
    return SweepRow{value, n, std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), true};
}

template <class CellFn>
std::vector<SweepRow> run_cells(const SweepSpec& spec, CellFn&& cell) {
    validate_run_config(spec.run);
    const std::vector<double> values =
        spec.values.empty() ? default_grid(spec.varied) : spec.values;
    const std::vector<int> n_values =
        spec.n_values.empty() ? default_n_values() : spec.n_values;
    std::vector<SweepRow> rows;
    rows.reserve(values.size() * n_values.size());
    for (double v : values) {
        for (int n : n_values) {
            const SystemParams raw = cell_raw(spec.base, spec.varied, v, n);
            SystemParams p{};
            try {
                p = validate_params(raw.lambda, raw.mu, raw.b1, raw.b2, raw.n);
            } catch (const ValidationError&) {
                rows.push_back(skipped_row(v, n));
                continue;
            }
            rows.push_back(cell(p, v, n));
        }
    }
    return rows;
}

}  // namespace detail

// Fig.-5-style table: per cell, the percent extra simulated delay of the
// equalized-delay split over the simulated-optimal split, both under common
// random numbers. The half-width comes from per-replication penalties.
inline std::vector<SweepRow> approx_penalty_sweep(const SweepSpec& spec) {
    if (spec.metric != SweepMetric::ApproxPenaltyPercent)
        throw std::invalid_argument("spec.metric must be ApproxPenaltyPercent");
    return detail::run_cells(spec, [&](const SystemParams& p, double v, int n) {
        const double alpha_approx = agg_split_ratio_approx(p).alpha;
        const SimOptimum opt = optimize_alpha_simulated(p, spec.run, spec.search_tolerance);
        const DelayStats approx = simulate_aggregated(p, alpha_approx, spec.run);
        const double penalty = 100.0 * (approx.mean - opt.stats.mean) / opt.stats.mean;
        std::vector<double> rep_penalties;
        rep_penalties.reserve(approx.rep_means.size());
        for (std::size_t r = 0; r < approx.rep_means.size(); ++r)
            rep_penalties.push_back(100.0 * (approx.rep_means[r] - opt.stats.rep_means[r]) /
                                    opt.stats.rep_means[r]);
        return SweepRow{v, n, penalty, ci_halfwidth_95(rep_penalties), false};
    });
}

// Fig.-6-style table: simulated aggregated delay at the equalized-delay split
// over the closed-form non-aggregated minimum.
inline std::vector<SweepRow> agg_ratio_sweep(const SweepSpec& spec) {
    if (spec.metric != SweepMetric::AggOverNonAggRatio)
        throw std::invalid_argument("spec.metric must be AggOverNonAggRatio");
    return detail::run_cells(spec, [&](const SystemParams& p, double v, int n) {
        const double alpha_approx = agg_split_ratio_approx(p).alpha;
        const DelayStats agg = simulate_aggregated(p, alpha_approx, spec.run);
        const double denom = nonagg_optimal_alpha(p).min_delay;
        return SweepRow{v, n, agg.mean / denom, agg.ci_halfwidth_95 / denom, false};
    });
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    return spec.metric == SweepMetric::ApproxPenaltyPercent ? approx_penalty_sweep(spec)
                                                            : agg_ratio_sweep(spec);
}

namespace detail {

inline void csv_float(std::ostream& os, double v) {
    if (std::isnan(v)) return;  // skipped cells leave the field empty
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    os << buf;
}

}  // namespace detail

// Header: metric,varied_param,varied_value,n,value,ci_halfwidth,status
inline void write_sweep_csv(std::ostream& os, SweepMetric metric, SweepParam varied,
                            const std::vector<SweepRow>& rows) {
    os << "metric,varied_param,varied_value,n,value,ci_halfwidth,status\n";
    for (const SweepRow& r : rows) {
        os << metric_name(metric) << ',' << param_name(varied) << ',';
        detail::csv_float(os, r.varied_value);
        os << ',' << r.n << ',';
        detail::csv_float(os, r.value);
        os << ',';
        detail::csv_float(os, r.ci_halfwidth);
        os << ',' << (r.skipped ? "skipped_infeasible" : "ok") << '\n';
    }
}

}  // namespace hybridq
