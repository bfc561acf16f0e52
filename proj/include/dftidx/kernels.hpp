#pragma once

// Data-parallel kernels. Every kernel has a serial reference path and an
// OpenMP path selected by `Execution`; both produce identical results, which
// the tests check and the benchmark target times.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dftidx/signal.hpp"

namespace dftidx {

enum class Execution { Serial, Parallel };

/// Number of OpenMP threads the parallel path will use.
int parallel_threads() noexcept;

struct FeatureBatch {
    std::vector<TimeSequence> normalized;   // empty values where `errors` is set
    std::vector<SpectrumFeature> features;  // default-constructed where `errors` is set
    std::vector<std::string> errors;        // empty string on success
};

/// normalize + extract_features for each sequence; per-sequence failures are
/// reported in `errors` instead of thrown.
FeatureBatch extract_feature_batch(std::span<const TimeSequence> seqs, std::size_t k,
                                   Execution exec = Execution::Parallel);

/// Row-major block of equal-length rows.
struct RowView {
    std::span<const double> data;
    std::size_t row_length;

    std::size_t rows() const noexcept { return row_length == 0 ? 0 : data.size() / row_length; }
    std::span<const double> row(std::size_t i) const noexcept {
        return data.subspan(i * row_length, row_length);
    }
};

struct ScanHit {
    std::size_t row;
    double distance;

    friend bool operator==(const ScanHit&, const ScanHit&) = default;
};

/// Distance from `query` to every row.
std::vector<double> scan_distances(RowView rows, std::span<const double> query,
                                   Execution exec = Execution::Parallel);

/// Rows with distance < epsilon, sorted by (distance, row).
std::vector<ScanHit> scan_range(RowView rows, std::span<const double> query, double epsilon,
                                Execution exec = Execution::Parallel);

struct PairHit {
    std::size_t a;
    std::size_t b;
    double distance;

    friend bool operator==(const PairHit&, const PairHit&) = default;
};

/// Nested-loop self-join: all a < b with distance < epsilon, sorted by (a, b).
std::vector<PairHit> scan_pairs(RowView rows, double epsilon,
                                Execution exec = Execution::Parallel);

}  // namespace dftidx
