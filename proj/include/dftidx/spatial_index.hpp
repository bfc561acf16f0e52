#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "dftidx/metrics.hpp"

namespace dftidx {

using EntryId = std::uint64_t;

/// Minimum bounding rectangle, closed on both ends.
struct Mbr {
    std::vector<double> low;
    std::vector<double> high;

    static Mbr of_point(std::span<const double> point);
    static Mbr of_region(const QueryRegion& region);

    std::size_t dimension() const noexcept { return low.size(); }
    bool contains(std::span<const double> point) const noexcept;
    bool contains(const Mbr& other) const noexcept;
    bool intersects(const Mbr& other) const noexcept;
    void expand(const Mbr& other);
    void expand(std::span<const double> point);
    double volume() const noexcept;
    double margin() const noexcept;
    /// Squared distance from `point` to the nearest point of the box.
    double min_distance_squared(std::span<const double> point) const noexcept;

    friend bool operator==(const Mbr&, const Mbr&) = default;
};

struct LeafEntry {
    std::vector<double> point;
    EntryId id = 0;
};

struct MbrNode {
    Mbr mbr;
    bool is_leaf = true;
    std::vector<std::unique_ptr<MbrNode>> children;  // internal nodes
    std::vector<LeafEntry> entries;                  // leaves

    std::size_t fanout() const noexcept { return is_leaf ? entries.size() : children.size(); }
};

/// Logical work counters for one query.
struct IndexStats {
    std::size_t nodes_touched = 0;
    std::size_t candidates = 0;

    IndexStats& operator+=(const IndexStats& o) noexcept {
        nodes_touched += o.nodes_touched;
        candidates += o.candidates;
        return *this;
    }
};

struct SearchResult {
    std::vector<EntryId> ids;
    IndexStats stats;
};

struct Neighbor {
    EntryId id = 0;
    double distance = 0.0;
};

struct JoinResult {
    std::vector<std::pair<EntryId, EntryId>> pairs;
    IndexStats stats;
};

/// R-tree over fixed-dimension points.
///
/// Bulk construction uses sort-tile-recursive packing; incremental inserts use
/// Guttman's quadratic split. Both keep every non-root node between
/// min_fanout() and max_fanout() children. The tree is read-only during
/// queries, so const member functions may run concurrently.
class MbrTree {
public:
    explicit MbrTree(std::size_t dimension = 0, std::size_t max_fanout = 32);

    MbrTree(MbrTree&&) noexcept = default;
    MbrTree& operator=(MbrTree&&) noexcept = default;

    static MbrTree build(std::vector<LeafEntry> points, std::size_t max_fanout = 32);

    void insert(LeafEntry entry);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t max_fanout() const noexcept { return max_fanout_; }
    std::size_t min_fanout() const noexcept { return min_fanout_; }
    std::size_t height() const noexcept;
    const MbrNode* root() const noexcept { return root_.get(); }

    /// Entries whose point lies in the closed box. Counts every node whose MBR
    /// is opened, and every returned entry as a candidate.
    SearchResult range_search(const Mbr& box) const;
    SearchResult range_search(const QueryRegion& region) const;

    /// The k_out entries with the smallest weighted coordinate distance
    /// (Baseline: unweighted, Symmetric: double-weighted), ties broken by id.
    std::vector<Neighbor> nearest_neighbors(std::span<const double> query, std::size_t k_out,
                                            RegionPolicy bound,
                                            IndexStats* stats = nullptr) const;

    /// All entry pairs (a in *this, b in other) with |a_d - b_d| < h in every
    /// dimension, h = half_width(epsilon, policy). Node pairs are pruned when
    /// one MBR extended by h on every side misses the other. When `other` is
    /// this tree the result is a self-join: no (x, x) pairs and each unordered
    /// pair once, reported as (smaller id, larger id). nodes_touched counts
    /// visited node pairs.
    JoinResult join(const MbrTree& other, double epsilon, RegionPolicy policy) const;

    /// All leaf entries, sorted by id.
    std::vector<LeafEntry> entries() const;

    /// Throws std::logic_error if any structural invariant is broken.
    void check_invariants() const;

    /// Binary snapshot: magic, dimension, fanout, then (id, coords) per entry.
    void save(const std::filesystem::path& path) const;
    static MbrTree load(const std::filesystem::path& path);

private:
    std::unique_ptr<MbrNode> insert_into(MbrNode& node, LeafEntry entry, std::size_t depth,
                                         std::size_t leaf_depth);

    std::size_t dimension_;
    std::size_t max_fanout_;
    std::size_t min_fanout_;
    std::size_t size_ = 0;
    std::unique_ptr<MbrNode> root_;
};

/// Best-first traversal yielding entries in non-decreasing bound distance.
///
/// peek_bound() is a lower bound on the distance of every entry not yet
/// returned, which is what exact filter-and-refine kNN needs.
class NearestIterator {
public:
    NearestIterator(const MbrTree& tree, std::span<const double> query, RegionPolicy bound);

    std::optional<Neighbor> next();
    double peek_bound() const noexcept;
    const IndexStats& stats() const noexcept { return stats_; }

private:
    struct Item {
        double distance;
        const MbrNode* node;     // null for entries
        const LeafEntry* entry;  // null for nodes
    };
    struct Later {
        bool operator()(const Item& a, const Item& b) const noexcept;
    };

    double bound_of(const Mbr& box) const noexcept;

    std::vector<double> query_;
    double weight_;
    std::priority_queue<Item, std::vector<Item>, Later> heap_;
    IndexStats stats_;
};

}  // namespace dftidx
