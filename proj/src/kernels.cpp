#include "dftidx/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "dftidx/metrics.hpp"

namespace dftidx {

int parallel_threads() noexcept { return omp_get_max_threads(); }

namespace {

void extract_one(const TimeSequence& seq, std::size_t k, FeatureBatch& out, std::size_t i) {
    try {
        if (min_length_for(k) > seq.length() || k == 0) {
            throw std::invalid_argument("k = " + std::to_string(k) + " too large for length " +
                                        std::to_string(seq.length()));
        }
        auto [normalized, params] = normalize(seq);
        out.features[i] = features_of_normalized(normalized, k, params);
        out.normalized[i] = std::move(normalized);
    } catch (const std::exception& e) {
        out.errors[i] = e.what();
    }
}

}  // namespace

FeatureBatch extract_feature_batch(std::span<const TimeSequence> seqs, std::size_t k,
                                   Execution exec) {
    FeatureBatch out;
    out.normalized.resize(seqs.size());
    out.features.resize(seqs.size());
    out.errors.resize(seqs.size());
    const auto n = static_cast<std::ptrdiff_t>(seqs.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            extract_one(seqs[static_cast<std::size_t>(i)], k, out, static_cast<std::size_t>(i));
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            extract_one(seqs[static_cast<std::size_t>(i)], k, out, static_cast<std::size_t>(i));
        }
    }
    return out;
}

std::vector<double> scan_distances(RowView rows, std::span<const double> query, Execution exec) {
    if (query.size() != rows.row_length) throw std::invalid_argument("query length mismatch");
    const auto n = static_cast<std::ptrdiff_t>(rows.rows());
    std::vector<double> dist(rows.rows());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            dist[static_cast<std::size_t>(i)] =
                true_distance(rows.row(static_cast<std::size_t>(i)), query);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            dist[static_cast<std::size_t>(i)] =
                true_distance(rows.row(static_cast<std::size_t>(i)), query);
        }
    }
    return dist;
}

std::vector<ScanHit> scan_range(RowView rows, std::span<const double> query, double epsilon,
                                Execution exec) {
    const auto dist = scan_distances(rows, query, exec);
    std::vector<ScanHit> hits;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] < epsilon) hits.push_back({i, dist[i]});
    }
    std::sort(hits.begin(), hits.end(), [](const ScanHit& a, const ScanHit& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.row < b.row;
    });
    return hits;
}

std::vector<PairHit> scan_pairs(RowView rows, double epsilon, Execution exec) {
    const std::size_t n = rows.rows();
    // One bucket per outer row keeps the output order independent of the
    // thread schedule.
    std::vector<std::vector<PairHit>> buckets(n);
    auto scan_row = [&](std::size_t a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double d = true_distance(rows.row(a), rows.row(b));
            if (d < epsilon) buckets[a].push_back({a, b, d});
        }
    };
    const auto sn = static_cast<std::ptrdiff_t>(n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t a = 0; a < sn; ++a) scan_row(static_cast<std::size_t>(a));
    } else {
        for (std::ptrdiff_t a = 0; a < sn; ++a) scan_row(static_cast<std::size_t>(a));
    }
    std::vector<PairHit> out;
    for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace dftidx
