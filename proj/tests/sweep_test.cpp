#include "hybridq/sweep.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

using namespace hybridq;

namespace {

RunConfig tiny_run(std::uint64_t seed) {
    RunConfig c;
    c.num_requests = 8000;
    c.warmup_requests = 800;
    c.replications = 5;
    c.master_seed = seed;
    return c;
}

}  // namespace

TEST(DefaultGrids, BracketTheBasePoint) {
    const auto lambda = default_grid(SweepParam::Lambda);
    ASSERT_EQ(lambda.size(), 10u);
    EXPECT_DOUBLE_EQ(lambda.front(), 0.1);
    EXPECT_NEAR(lambda[4], 0.5, 1e-12);
    EXPECT_EQ(default_grid(SweepParam::Mu).size(), 10u);
    EXPECT_EQ(default_grid(SweepParam::B1).size(), 9u);
    EXPECT_EQ(default_grid(SweepParam::B2).size(), 8u);
    for (double b1 : default_grid(SweepParam::B1)) EXPECT_LT(b1, 100.0);
    EXPECT_EQ(default_n_values().size(), 10u);
}

TEST(RatioSweep, TableShapeAndOrdering) {
    SweepSpec spec;
    spec.metric = SweepMetric::AggOverNonAggRatio;
    spec.varied = SweepParam::Lambda;
    spec.values = {0.4, 0.5};
    spec.n_values = {1, 2};
    spec.run = tiny_run(7);
    const auto rows = agg_ratio_sweep(spec);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_DOUBLE_EQ(rows[0].varied_value, 0.4);
    EXPECT_EQ(rows[0].n, 1);
    EXPECT_DOUBLE_EQ(rows[1].varied_value, 0.4);
    EXPECT_EQ(rows[1].n, 2);
    EXPECT_DOUBLE_EQ(rows[2].varied_value, 0.5);
    EXPECT_EQ(rows[2].n, 1);
    EXPECT_EQ(rows[3].n, 2);
    for (const auto& r : rows) {
        EXPECT_FALSE(r.skipped);
        EXPECT_LT(r.value, 1.0);
        EXPECT_GT(r.value, 0.0);
        EXPECT_GT(r.ci_halfwidth, 0.0);
    }
}

TEST(RatioSweep, InfeasibleCellsAreSkippedNotDropped) {
    SweepSpec spec;
    spec.metric = SweepMetric::AggOverNonAggRatio;
    spec.varied = SweepParam::Lambda;
    spec.values = {0.5, 3.0};  // 3.0*90 = 270 >= 150
    spec.n_values = {1};
    spec.run = tiny_run(8);
    const auto rows = agg_ratio_sweep(spec);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_FALSE(rows[0].skipped);
    EXPECT_TRUE(rows[1].skipped);
    EXPECT_TRUE(std::isnan(rows[1].value));
}

TEST(PenaltySweep, SingleApPenaltyNearZero) {
    SweepSpec spec;
    spec.metric = SweepMetric::ApproxPenaltyPercent;
    spec.varied = SweepParam::Lambda;
    spec.values = {0.5};
    spec.n_values = {1};
    spec.run = tiny_run(9);
    spec.run.num_requests = 20000;
    spec.run.warmup_requests = 2000;
    const auto rows = approx_penalty_sweep(spec);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].skipped);
    // exact for n=1: indistinguishable from zero at this run length
    EXPECT_LE(std::abs(rows[0].value), rows[0].ci_halfwidth + 0.1);
}

TEST(PenaltySweep, MetricFieldIsEnforced) {
    SweepSpec spec;
    spec.metric = SweepMetric::AggOverNonAggRatio;
    EXPECT_THROW(approx_penalty_sweep(spec), std::invalid_argument);
    spec.metric = SweepMetric::ApproxPenaltyPercent;
    EXPECT_THROW(agg_ratio_sweep(spec), std::invalid_argument);
}

TEST(Sweep, RerunsAreIdentical) {
    SweepSpec spec;
    spec.metric = SweepMetric::AggOverNonAggRatio;
    spec.varied = SweepParam::B2;
    spec.values = {100.0, 140.0};
    spec.n_values = {1, 2};
    spec.run = tiny_run(10);
    const auto a = agg_ratio_sweep(spec);
    const auto b = agg_ratio_sweep(spec);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].value, b[i].value);
        EXPECT_EQ(a[i].ci_halfwidth, b[i].ci_halfwidth);
    }

    std::ostringstream csv_a, csv_b;
    write_sweep_csv(csv_a, spec.metric, spec.varied, a);
    write_sweep_csv(csv_b, spec.metric, spec.varied, b);
    EXPECT_EQ(csv_a.str(), csv_b.str());
}

TEST(SweepCsv, FormatContract) {
    std::vector<SweepRow> rows;
    rows.push_back(SweepRow{0.5, 3, 0.123456789012345, 0.000123456789, false});
    rows.push_back(SweepRow{3.0, 3, std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN(), true});
    std::ostringstream os;
    write_sweep_csv(os, SweepMetric::AggOverNonAggRatio, SweepParam::Lambda, rows);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "metric,varied_param,varied_value,n,value,ci_halfwidth,status");
    std::getline(is, line);
    EXPECT_EQ(line, "agg_over_nonagg_ratio,lambda,0.5,3,0.123456789,0.000123456789,ok");
    std::getline(is, line);
    EXPECT_EQ(line, "agg_over_nonagg_ratio,lambda,3,3,,,skipped_infeasible");
    EXPECT_FALSE(std::getline(is, line));
}
