#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dftidx/datagen.hpp"
#include "dftidx/engine.hpp"

namespace dftidx {

enum class SweepKind { Threshold, Coefficients, Count, Length };
enum class QueryMode { Range, Join, Knn };

SweepKind parse_sweep(const std::string& name);
QueryMode parse_mode(const std::string& name);
std::string_view to_string(SweepKind kind) noexcept;
std::string_view to_string(QueryMode mode) noexcept;

/// One experiment. Thresholds are given as a fraction of MaxAmp.
struct BenchConfig {
    std::optional<GenSpec> generator;   // used when `dataset` is empty
    std::vector<TimeSequence> dataset;
    std::size_t k = 2;
    double eps_frac = 0.95;
    QueryMode mode = QueryMode::Range;
    std::size_t repetitions = 100;
    std::size_t k_out = 10;
    std::vector<RegionPolicy> policies{RegionPolicy::Baseline, RegionPolicy::Symmetric};
    std::uint64_t seed = 1;
    std::size_t max_fanout = 32;
    std::size_t join_cap = 2000;  // all-pair queries use at most this many sequences
    bool timing = true;           // false writes 0 for elapsed time
    Execution exec = Execution::Parallel;
};

struct SweepRow {
    SweepKind sweep = SweepKind::Threshold;
    double value = 0.0;
    QueryMode mode = QueryMode::Range;
    RegionPolicy policy = RegionPolicy::Symmetric;
    std::size_t k = 0;
    std::size_t length = 0;
    std::size_t count = 0;
    double eps_frac = 0.0;
    double epsilon = 0.0;
    std::size_t queries = 0;
    double mean_answers = 0.0;
    double mean_candidates = 0.0;
    double mean_false_positives = 0.0;
    double mean_nodes_touched = 0.0;
    double mean_elapsed_us = 0.0;
    std::optional<double> candidate_reduction_pct;  // Symmetric rows only
    std::optional<double> node_reduction_pct;
    std::string status = "ok";
};

/// Runs every sweep value under every configured policy. Query sequences are
/// drawn from the dataset with a sampler seeded by (seed, sweep point), and
/// each policy sees the same queries. Incompatible sweep values produce a
/// row whose status starts with "skipped".
std::vector<SweepRow> bench_sweep(const BenchConfig& config, SweepKind sweep,
                                  std::span<const double> values);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace dftidx
