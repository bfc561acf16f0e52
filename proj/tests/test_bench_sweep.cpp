#include <gtest/gtest.h>

#include <sstream>

#include "dftidx/bench_sweep.hpp"

using namespace dftidx;

namespace {

BenchConfig small_config(QueryMode mode = QueryMode::Range) {
    BenchConfig cfg;
    GenSpec spec;
    spec.count = 300;
    spec.seed = 4;
    cfg.generator = spec;
    cfg.mode = mode;
    cfg.repetitions = 20;
    cfg.timing = false;
    return cfg;
}

std::string csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_sweep_csv(out, rows);
    return out.str();
}

}  // namespace

TEST(BenchSweep, ThresholdSweepIsReproducible) {
    const std::vector<double> values{0.3, 0.6, 0.95};
    const auto a = bench_sweep(small_config(), SweepKind::Threshold, values);
    auto serial_cfg = small_config();
    serial_cfg.exec = Execution::Serial;
    const auto b = bench_sweep(serial_cfg, SweepKind::Threshold, values);
    EXPECT_EQ(csv(a), csv(b));
    ASSERT_EQ(a.size(), 6u);
    for (const auto& r : a) {
        EXPECT_EQ(r.status, "ok");
        EXPECT_EQ(r.queries, 20u);
        EXPECT_EQ(r.count, 300u);
        EXPECT_EQ(r.mean_elapsed_us, 0.0);
        EXPECT_EQ(r.candidate_reduction_pct.has_value(), r.policy == RegionPolicy::Symmetric);
    }
    for (std::size_t i = 0; i < a.size(); i += 2) {
        EXPECT_EQ(a[i].policy, RegionPolicy::Baseline);
        EXPECT_EQ(a[i].mean_answers, a[i + 1].mean_answers);
        EXPECT_LE(a[i + 1].mean_candidates, a[i].mean_candidates);
        EXPECT_GT(*a[i + 1].candidate_reduction_pct, 0.0);
    }
}

TEST(BenchSweep, CoefficientSweepSkipsOversizedK) {
    auto cfg = small_config(QueryMode::Knn);
    cfg.generator->length = 8;
    const std::vector<double> values{1, 3, 4, 2.5};
    const auto rows = bench_sweep(cfg, SweepKind::Coefficients, values);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0].status, "ok");
    EXPECT_EQ(rows[2].status, "ok");
    EXPECT_EQ(rows[4].status.rfind("skipped", 0), 0u) << rows[4].status;
    EXPECT_EQ(rows[6].status.rfind("skipped", 0), 0u) << rows[6].status;
    EXPECT_EQ(rows[0].mean_answers, 10.0);
}

TEST(BenchSweep, CountSweepAndJoinCap) {
    auto cfg = small_config(QueryMode::Join);
    cfg.join_cap = 150;
    const std::vector<double> values{100, 200, 1000};
    const auto rows = bench_sweep(cfg, SweepKind::Count, values);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].count, 100u);
    EXPECT_EQ(rows[0].status, "ok");
    EXPECT_EQ(rows[2].count, 150u);
    EXPECT_EQ(rows[2].status, "ok: capped to 150 sequences");
    EXPECT_EQ(rows[4].status.rfind("skipped", 0), 0u);
    EXPECT_EQ(rows[0].mean_answers, rows[1].mean_answers);
}

TEST(BenchSweep, LengthSweepRegenerates) {
    const std::vector<double> values{64, 256};
    const auto rows = bench_sweep(small_config(), SweepKind::Length, values);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].length, 64u);
    EXPECT_EQ(rows[2].length, 256u);
}

TEST(BenchSweep, CsvHeader) {
    const auto text = csv({});
    EXPECT_EQ(text,
              "sweep,value,mode,policy,k,length,count,eps_frac,epsilon,queries,mean_answers,"
              "mean_candidates,mean_false_positives,mean_nodes_touched,mean_elapsed_us,"
              "candidate_reduction_pct,node_reduction_pct,status\n");
}

TEST(BenchSweep, Validation) {
    auto cfg = small_config();
    cfg.repetitions = 0;
    const std::vector<double> values{0.5};
    EXPECT_THROW(bench_sweep(cfg, SweepKind::Threshold, values), std::invalid_argument);
    BenchConfig empty;
    EXPECT_THROW(bench_sweep(empty, SweepKind::Threshold, values), std::invalid_argument);
    EXPECT_EQ(parse_sweep("k"), SweepKind::Coefficients);
    EXPECT_EQ(parse_mode("join"), QueryMode::Join);
    EXPECT_THROW(parse_sweep("size"), std::invalid_argument);
}
