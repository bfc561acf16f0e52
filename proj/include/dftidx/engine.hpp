#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dftidx/kernels.hpp"
#include "dftidx/metrics.hpp"
#include "dftidx/signal.hpp"
#include "dftidx/spatial_index.hpp"

namespace dftidx {

struct StoredSequence {
    TimeSequence raw;
    NormalizationParams norm;
};

/// Raw sequences addressed by dense EntryId, plus a row-major block of their
/// normalized values for the refine step.
class SequenceStore {
public:
    EntryId add(TimeSequence raw, const TimeSequence& normalized, NormalizationParams norm);

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    std::size_t sequence_length() const noexcept { return length_; }
    const StoredSequence& at(EntryId id) const { return items_.at(id); }
    std::optional<EntryId> find(const std::string& id) const;
    std::span<const double> normalized(EntryId id) const;
    RowView normalized_rows() const noexcept { return {normalized_, length_}; }
    std::vector<TimeSequence> raw_sequences() const;

private:
    std::vector<StoredSequence> items_;
    std::unordered_map<std::string, EntryId> by_name_;
    std::vector<double> normalized_;
    std::size_t length_ = 0;
};

enum class QueryKind { Range, Knn, Join };

std::string_view to_string(QueryKind kind) noexcept;

struct Match {
    std::string id;
    double distance = 0.0;
};

struct PairMatch {
    std::string first;
    std::string second;
    double distance = 0.0;
};

/// Outcome of one filter-and-refine query. Range and kNN fill `answers`,
/// all-pair queries fill `pairs`.
struct QueryReport {
    QueryKind kind = QueryKind::Range;
    RegionPolicy policy = RegionPolicy::Symmetric;
    double epsilon = 0.0;
    std::vector<Match> answers;
    std::vector<PairMatch> pairs;
    std::size_t candidates = 0;
    std::size_t false_positives = 0;
    std::size_t nodes_touched = 0;
    std::int64_t elapsed_micros = 0;
    bool k_exceeds_dataset = false;

    std::size_t answer_count() const noexcept {
        return kind == QueryKind::Join ? pairs.size() : answers.size();
    }
};

/// policy,epsilon,answers,candidates,false_positives,nodes_touched,elapsed_micros
std::string report_csv_header();
std::string to_csv_row(const QueryReport& report);

struct SkipReport {
    std::string id;
    std::string reason;
};

struct EngineOptions {
    std::size_t k = 2;
    std::size_t max_fanout = 32;
    Execution exec = Execution::Parallel;
};

/// Feature index plus sequence store. All distances are between normalized
/// sequences. Query member functions are const and safe to call
/// concurrently.
class Engine {
public:
    /// Normalizes and features every sequence; constant (or otherwise
    /// unindexable) sequences are skipped and listed in skipped(). Throws on
    /// inconsistent lengths or duplicate ids.
    static Engine index_dataset(std::span<const TimeSequence> seqs, EngineOptions options = {});

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return store_.size(); }
    std::size_t sequence_length() const noexcept { return store_.sequence_length(); }
    const MbrTree& index() const noexcept { return index_; }
    const SequenceStore& store() const noexcept { return store_; }
    const std::vector<SpectrumFeature>& features() const noexcept { return features_; }
    const std::vector<SkipReport>& skipped() const noexcept { return skipped_; }

    /// Normalized copy of `q` and its features; rejects constant or
    /// wrong-length queries.
    std::pair<TimeSequence, SpectrumFeature> prepare_query(const TimeSequence& q) const;

    /// Filter with the policy's search rectangle, refine with the exact
    /// distance; answers are those with distance < epsilon.
    QueryReport range_query(const TimeSequence& q, double epsilon, RegionPolicy policy) const;

    /// Exact k_out nearest neighbours. `bound` picks the traversal's lower
    /// bound (Symmetric: double-weighted, Baseline: unweighted).
    QueryReport knn_query(const TimeSequence& q, std::size_t k_out,
                          RegionPolicy bound = RegionPolicy::Symmetric) const;

    /// Self-join: unordered pairs with distance < epsilon.
    QueryReport all_pairs(double epsilon, RegionPolicy policy) const;

    /// Max |X_1| over the indexed normalized sequences.
    double max_amp() const;

    /// Writes `<prefix>.idx` (index snapshot) and `<prefix>.seq.csv` (store).
    void save(const std::filesystem::path& prefix) const;
    static Engine load(const std::filesystem::path& prefix,
                       Execution exec = Execution::Parallel);

    static std::filesystem::path index_path(const std::filesystem::path& prefix);
    static std::filesystem::path store_path(const std::filesystem::path& prefix);

private:
    std::size_t k_ = 0;
    MbrTree index_;
    SequenceStore store_;
    std::vector<SpectrumFeature> features_;
    std::vector<SkipReport> skipped_;
};

}  // namespace dftidx
