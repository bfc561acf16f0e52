#include "dftidx/spatial_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dftidx {

// ---------------------------------------------------------------------------
// Mbr

Mbr Mbr::of_point(std::span<const double> point) {
    return Mbr{{point.begin(), point.end()}, {point.begin(), point.end()}};
}

Mbr Mbr::of_region(const QueryRegion& region) {
    Mbr box;
    box.low.resize(region.dimension());
    box.high.resize(region.dimension());
    for (std::size_t d = 0; d < region.dimension(); ++d) {
        box.low[d] = region.center[d] - region.half_widths[d];
        box.high[d] = region.center[d] + region.half_widths[d];
    }
    return box;
}

bool Mbr::contains(std::span<const double> point) const noexcept {
    for (std::size_t d = 0; d < low.size(); ++d) {
        if (point[d] < low[d] || point[d] > high[d]) return false;
    }
    return true;
}

bool Mbr::contains(const Mbr& other) const noexcept {
    for (std::size_t d = 0; d < low.size(); ++d) {
        if (other.low[d] < low[d] || other.high[d] > high[d]) return false;
    }
    return true;
}

bool Mbr::intersects(const Mbr& other) const noexcept {
    for (std::size_t d = 0; d < low.size(); ++d) {
        if (other.high[d] < low[d] || other.low[d] > high[d]) return false;
    }
    return true;
}

void Mbr::expand(const Mbr& other) {
    for (std::size_t d = 0; d < low.size(); ++d) {
        low[d] = std::min(low[d], other.low[d]);
        high[d] = std::max(high[d], other.high[d]);
    }
}

void Mbr::expand(std::span<const double> point) {
    for (std::size_t d = 0; d < low.size(); ++d) {
        low[d] = std::min(low[d], point[d]);
        high[d] = std::max(high[d], point[d]);
    }
}

double Mbr::volume() const noexcept {
    double v = 1.0;
    for (std::size_t d = 0; d < low.size(); ++d) v *= high[d] - low[d];
    return v;
}

double Mbr::margin() const noexcept {
    double m = 0.0;
    for (std::size_t d = 0; d < low.size(); ++d) m += high[d] - low[d];
    return m;
}

double Mbr::min_distance_squared(std::span<const double> point) const noexcept {
    double sum = 0.0;
    for (std::size_t d = 0; d < low.size(); ++d) {
        double gap = 0.0;
        if (point[d] < low[d]) {
            gap = low[d] - point[d];
        } else if (point[d] > high[d]) {
            gap = point[d] - high[d];
        }
        sum += gap * gap;
    }
    return sum;
}

namespace {

const Mbr& box_of(const std::unique_ptr<MbrNode>& child) { return child->mbr; }
Mbr box_of(const LeafEntry& entry) { return Mbr::of_point(entry.point); }

double center_of(const std::unique_ptr<MbrNode>& child, std::size_t d) {
    return 0.5 * (child->mbr.low[d] + child->mbr.high[d]);
}
double center_of(const LeafEntry& entry, std::size_t d) { return entry.point[d]; }

void recompute_mbr(MbrNode& node) {
    if (node.is_leaf) {
        if (node.entries.empty()) return;
        node.mbr = Mbr::of_point(node.entries.front().point);
        for (const auto& e : node.entries) node.mbr.expand(e.point);
    } else {
        if (node.children.empty()) return;
        node.mbr = node.children.front()->mbr;
        for (const auto& c : node.children) node.mbr.expand(c->mbr);
    }
}

// Lexicographic (volume, margin) cost so that degenerate boxes with zero
// volume still get ordered.
struct Cost {
    double volume;
    double margin;
    friend auto operator<=>(const Cost&, const Cost&) = default;
};

Cost enlargement(const Mbr& box, const Mbr& add) {
    Mbr joined = box;
    joined.expand(add);
    return {joined.volume() - box.volume(), joined.margin() - box.margin()};
}

Cost size_of(const Mbr& box) { return {box.volume(), box.margin()}; }

// Orders items sort-tile-recursively: slabs along dimension 0, each slab
// tiled along dimension 1, and so on.
template <class T>
void str_order(std::span<T> items, std::size_t dim, std::size_t dims, std::size_t capacity) {
    auto by_dim = [dim](const T& a, const T& b) { return center_of(a, dim) < center_of(b, dim); };
    std::sort(items.begin(), items.end(), by_dim);
    if (dim + 1 >= dims || items.size() <= capacity) return;
    const std::size_t pages = (items.size() + capacity - 1) / capacity;
    const auto slabs = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(pages), 1.0 / static_cast<double>(dims - dim))));
    const std::size_t slab_size = ((pages + slabs - 1) / slabs) * capacity;
    for (std::size_t start = 0; start < items.size(); start += slab_size) {
        const std::size_t len = std::min(slab_size, items.size() - start);
        str_order(items.subspan(start, len), dim + 1, dims, capacity);
    }
}

// Packs one tree level; groups are of near-equal size so that every group is
// at least half full whenever more than one group is formed.
template <class T>
std::vector<std::unique_ptr<MbrNode>> pack_level(std::vector<T> items, std::size_t dims,
                                                 std::size_t capacity, bool leaf) {
    str_order(std::span<T>(items), 0, dims, capacity);
    const std::size_t n = items.size();
    const std::size_t groups = (n + capacity - 1) / capacity;
    std::vector<std::unique_ptr<MbrNode>> level;
    level.reserve(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t begin = g * n / groups;
        const std::size_t end = (g + 1) * n / groups;
        auto node = std::make_unique<MbrNode>();
        node->is_leaf = leaf;
        for (std::size_t i = begin; i < end; ++i) {
            if constexpr (std::is_same_v<T, LeafEntry>) {
                node->entries.push_back(std::move(items[i]));
            } else {
                node->children.push_back(std::move(items[i]));
            }
        }
        recompute_mbr(*node);
        level.push_back(std::move(node));
    }
    return level;
}

// Guttman's quadratic split.
template <class T>
std::pair<std::vector<T>, std::vector<T>> quadratic_split(std::vector<T> items,
                                                          std::size_t min_fill) {
    std::vector<Mbr> boxes;
    boxes.reserve(items.size());
    for (const auto& it : items) boxes.push_back(box_of(it));

    std::size_t seed_a = 0;
    std::size_t seed_b = 1;
    std::optional<Cost> worst;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            Mbr joined = boxes[i];
            joined.expand(boxes[j]);
            const Cost waste{joined.volume() - boxes[i].volume() - boxes[j].volume(),
                             joined.margin() - boxes[i].margin() - boxes[j].margin()};
            if (!worst || waste > *worst) {
                worst = waste;
                seed_a = i;
                seed_b = j;
            }
        }
    }

    std::vector<T> group_a;
    std::vector<T> group_b;
    Mbr box_a = boxes[seed_a];
    Mbr box_b = boxes[seed_b];
    group_a.push_back(std::move(items[seed_a]));
    group_b.push_back(std::move(items[seed_b]));

    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i != seed_a && i != seed_b) remaining.push_back(i);
    }

    while (!remaining.empty()) {
        if (group_a.size() + remaining.size() == min_fill) {
            for (auto i : remaining) group_a.push_back(std::move(items[i]));
            break;
        }
        if (group_b.size() + remaining.size() == min_fill) {
            for (auto i : remaining) group_b.push_back(std::move(items[i]));
            break;
        }
        // Pick the entry with the strongest preference for one group.
        std::size_t pick = 0;
        Cost best_diff{-1.0, -1.0};
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            const Cost ea = enlargement(box_a, boxes[remaining[r]]);
            const Cost eb = enlargement(box_b, boxes[remaining[r]]);
            const Cost diff{std::abs(ea.volume - eb.volume), std::abs(ea.margin - eb.margin)};
            if (diff > best_diff) {
                best_diff = diff;
                pick = r;
            }
        }
        const std::size_t idx = remaining[pick];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        const Cost ea = enlargement(box_a, boxes[idx]);
        const Cost eb = enlargement(box_b, boxes[idx]);
        bool to_a;
        if (ea != eb) {
            to_a = ea < eb;
        } else if (size_of(box_a) != size_of(box_b)) {
            to_a = size_of(box_a) < size_of(box_b);
        } else {
            to_a = group_a.size() <= group_b.size();
        }
        if (to_a) {
            box_a.expand(boxes[idx]);
            group_a.push_back(std::move(items[idx]));
        } else {
            box_b.expand(boxes[idx]);
            group_b.push_back(std::move(items[idx]));
        }
    }
    return {std::move(group_a), std::move(group_b)};
}

template <class T>
std::unique_ptr<MbrNode> split_node(MbrNode& node, std::vector<T>& slots, std::size_t min_fill) {
    auto [keep, move] = quadratic_split(std::move(slots), min_fill);
    slots = std::move(keep);
    auto sibling = std::make_unique<MbrNode>();
    sibling->is_leaf = node.is_leaf;
    if constexpr (std::is_same_v<T, LeafEntry>) {
        sibling->entries = std::move(move);
    } else {
        sibling->children = std::move(move);
    }
    recompute_mbr(node);
    recompute_mbr(*sibling);
    return sibling;
}

}  // namespace

// ---------------------------------------------------------------------------
// MbrTree

MbrTree::MbrTree(std::size_t dimension, std::size_t max_fanout)
    : dimension_(dimension), max_fanout_(max_fanout), min_fanout_(std::max<std::size_t>(2, (2 * max_fanout) / 5)) {
    if (max_fanout < 4) throw std::invalid_argument("max_fanout must be at least 4");
}

MbrTree MbrTree::build(std::vector<LeafEntry> points, std::size_t max_fanout) {
    const std::size_t dims = points.empty() ? 0 : points.front().point.size();
    MbrTree tree(dims, max_fanout);
    if (points.empty()) return tree;
    if (dims == 0) throw std::invalid_argument("points must have at least one dimension");
    for (const auto& p : points) {
        if (p.point.size() != dims) {
            throw std::invalid_argument("mixed point dimensions: " + std::to_string(dims) +
                                        " vs " + std::to_string(p.point.size()));
        }
    }
    tree.size_ = points.size();
    auto level = pack_level(std::move(points), dims, max_fanout, true);
    while (level.size() > 1) level = pack_level(std::move(level), dims, max_fanout, false);
    tree.root_ = std::move(level.front());
    return tree;
}

std::size_t MbrTree::height() const noexcept {
    std::size_t h = 0;
    for (const MbrNode* n = root_.get(); n != nullptr;
         n = n->is_leaf ? nullptr : n->children.front().get()) {
        ++h;
    }
    return h;
}

void MbrTree::insert(LeafEntry entry) {
    if (dimension_ == 0 && size_ == 0) dimension_ = entry.point.size();
    if (entry.point.size() != dimension_ || dimension_ == 0) {
        throw std::invalid_argument("inserted point has dimension " +
                                    std::to_string(entry.point.size()) + ", index has " +
                                    std::to_string(dimension_));
    }
    if (!root_) {
        root_ = std::make_unique<MbrNode>();
        root_->is_leaf = true;
        root_->mbr = Mbr::of_point(entry.point);
        root_->entries.push_back(std::move(entry));
        size_ = 1;
        return;
    }
    const std::size_t leaf_depth = height() - 1;
    auto sibling = insert_into(*root_, std::move(entry), 0, leaf_depth);
    if (sibling) {
        auto new_root = std::make_unique<MbrNode>();
        new_root->is_leaf = false;
        new_root->children.push_back(std::move(root_));
        new_root->children.push_back(std::move(sibling));
        recompute_mbr(*new_root);
        root_ = std::move(new_root);
    }
    ++size_;
}

std::unique_ptr<MbrNode> MbrTree::insert_into(MbrNode& node, LeafEntry entry, std::size_t depth,
                                              std::size_t leaf_depth) {
    node.mbr.expand(entry.point);
    if (node.is_leaf) {
        node.entries.push_back(std::move(entry));
        if (node.entries.size() > max_fanout_) return split_node(node, node.entries, min_fanout_);
        return nullptr;
    }
    const Mbr point_box = Mbr::of_point(entry.point);
    std::size_t best = 0;
    for (std::size_t i = 1; i < node.children.size(); ++i) {
        const auto& cand = node.children[i]->mbr;
        const auto& cur = node.children[best]->mbr;
        const Cost ec = enlargement(cand, point_box);
        const Cost eb = enlargement(cur, point_box);
        if (ec < eb || (ec == eb && size_of(cand) < size_of(cur))) best = i;
    }
    auto sibling = insert_into(*node.children[best], std::move(entry), depth + 1, leaf_depth);
    if (sibling) {
        node.children.push_back(std::move(sibling));
        if (node.children.size() > max_fanout_) return split_node(node, node.children, min_fanout_);
    }
    return nullptr;
}

SearchResult MbrTree::range_search(const Mbr& box) const {
    SearchResult result;
    if (!root_) return result;
    if (box.dimension() != dimension_) {
        throw std::invalid_argument("region dimension " + std::to_string(box.dimension()) +
                                    " does not match index dimension " +
                                    std::to_string(dimension_));
    }
    std::vector<const MbrNode*> stack;
    if (root_->mbr.intersects(box)) stack.push_back(root_.get());
    while (!stack.empty()) {
        const MbrNode* node = stack.back();
        stack.pop_back();
        ++result.stats.nodes_touched;
        if (node->is_leaf) {
            for (const auto& e : node->entries) {
                if (box.contains(e.point)) result.ids.push_back(e.id);
            }
        } else {
            for (const auto& c : node->children) {
                if (c->mbr.intersects(box)) stack.push_back(c.get());
            }
        }
    }
    result.stats.candidates = result.ids.size();
    return result;
}

SearchResult MbrTree::range_search(const QueryRegion& region) const {
    if (root_ && region.dimension() != dimension_) {
        throw std::invalid_argument("region dimension " + std::to_string(region.dimension()) +
                                    " does not match index dimension " +
                                    std::to_string(dimension_));
    }
    return range_search(Mbr::of_region(region));
}

std::vector<Neighbor> MbrTree::nearest_neighbors(std::span<const double> query,
                                                 std::size_t k_out, RegionPolicy bound,
                                                 IndexStats* stats) const {
    if (k_out == 0) throw std::invalid_argument("k_out must be at least 1");
    std::vector<Neighbor> out;
    if (!root_) return out;
    NearestIterator it(*this, query, bound);
    while (out.size() < k_out) {
        auto next = it.next();
        if (!next) break;
        out.push_back(*next);
    }
    if (stats) {
        *stats = it.stats();
        stats->candidates = out.size();
    }
    return out;
}

namespace {

struct JoinContext {
    double reach;
    bool self;
    JoinResult* out;
};

// True if some pair of points (one per box) can be closer than `reach` in
// every dimension.
bool within_reach(const Mbr& a, const Mbr& b, double reach) noexcept {
    for (std::size_t d = 0; d < a.low.size(); ++d) {
        if (a.low[d] - b.high[d] >= reach || b.low[d] - a.high[d] >= reach) return false;
    }
    return true;
}

bool pair_qualifies(std::span<const double> a, std::span<const double> b, double reach) noexcept {
    for (std::size_t d = 0; d < a.size(); ++d) {
        if (!(std::abs(a[d] - b[d]) < reach)) return false;
    }
    return true;
}

void emit(JoinContext& ctx, EntryId a, EntryId b) {
    if (ctx.self && b < a) std::swap(a, b);
    ctx.out->pairs.emplace_back(a, b);
    ++ctx.out->stats.candidates;
}

void join_nodes(JoinContext& ctx, const MbrNode& a, const MbrNode& b) {
    ++ctx.out->stats.nodes_touched;
    const bool same = ctx.self && &a == &b;
    if (a.is_leaf && b.is_leaf) {
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            for (std::size_t j = same ? i + 1 : 0; j < b.entries.size(); ++j) {
                if (pair_qualifies(a.entries[i].point, b.entries[j].point, ctx.reach)) {
                    emit(ctx, a.entries[i].id, b.entries[j].id);
                }
            }
        }
        return;
    }
    if (same) {
        for (std::size_t i = 0; i < a.children.size(); ++i) {
            for (std::size_t j = i; j < a.children.size(); ++j) {
                const auto& ci = *a.children[i];
                const auto& cj = *a.children[j];
                if (within_reach(ci.mbr, cj.mbr, ctx.reach)) join_nodes(ctx, ci, cj);
            }
        }
        return;
    }
    if (a.is_leaf) {
        for (const auto& cb : b.children) {
            if (within_reach(a.mbr, cb->mbr, ctx.reach)) join_nodes(ctx, a, *cb);
        }
    } else if (b.is_leaf) {
        for (const auto& ca : a.children) {
            if (within_reach(ca->mbr, b.mbr, ctx.reach)) join_nodes(ctx, *ca, b);
        }
    } else {
        for (const auto& ca : a.children) {
            for (const auto& cb : b.children) {
                if (within_reach(ca->mbr, cb->mbr, ctx.reach)) join_nodes(ctx, *ca, *cb);
            }
        }
    }
}

}  // namespace

JoinResult MbrTree::join(const MbrTree& other, double epsilon, RegionPolicy policy) const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be positive and finite");
    }
    JoinResult result;
    if (!root_ || !other.root_) return result;
    if (dimension_ != other.dimension_) {
        throw std::invalid_argument("join of indices with different dimensions");
    }
    JoinContext ctx{half_width(epsilon, policy), &other == this, &result};
    if (within_reach(root_->mbr, other.root_->mbr, ctx.reach)) {
        join_nodes(ctx, *root_, *other.root_);
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

std::vector<LeafEntry> MbrTree::entries() const {
    std::vector<LeafEntry> out;
    out.reserve(size_);
    std::vector<const MbrNode*> stack;
    if (root_) stack.push_back(root_.get());
    while (!stack.empty()) {
        const MbrNode* node = stack.back();
        stack.pop_back();
        if (node->is_leaf) {
            out.insert(out.end(), node->entries.begin(), node->entries.end());
        } else {
            for (const auto& c : node->children) stack.push_back(c.get());
        }
    }
    std::sort(out.begin(), out.end(),
              [](const LeafEntry& a, const LeafEntry& b) { return a.id < b.id; });
    return out;
}

void MbrTree::check_invariants() const {
    if (!root_) {
        if (size_ != 0) throw std::logic_error("empty tree reports non-zero size");
        return;
    }
    std::size_t counted = 0;
    std::optional<std::size_t> leaf_depth;
    std::function<void(const MbrNode&, std::size_t)> walk = [&](const MbrNode& node,
                                                                std::size_t depth) {
        const bool is_root = &node == root_.get();
        if (node.fanout() > max_fanout_) throw std::logic_error("node exceeds max fanout");
        if (!is_root && node.fanout() < min_fanout_) {
            throw std::logic_error("non-root node below min fanout");
        }
        if (node.fanout() == 0) throw std::logic_error("empty node");
        Mbr tight;
        if (node.is_leaf) {
            if (!node.children.empty()) throw std::logic_error("leaf with child nodes");
            if (leaf_depth && *leaf_depth != depth) throw std::logic_error("unbalanced tree");
            leaf_depth = depth;
            tight = Mbr::of_point(node.entries.front().point);
            for (const auto& e : node.entries) {
                if (e.point.size() != dimension_) throw std::logic_error("entry dimension");
                tight.expand(e.point);
            }
            counted += node.entries.size();
        } else {
            if (!node.entries.empty()) throw std::logic_error("internal node with entries");
            tight = node.children.front()->mbr;
            for (const auto& c : node.children) {
                tight.expand(c->mbr);
                walk(*c, depth + 1);
            }
        }
        if (!(tight == node.mbr)) throw std::logic_error("node MBR is not tight");
    };
    walk(*root_, 0);
    if (counted != size_) throw std::logic_error("entry count does not match size");
}

namespace {

constexpr char kMagic[8] = {'D', 'F', 'T', 'I', 'D', 'X', '\x01', '\0'};

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; add byte swapping for this target");

template <class T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated index snapshot");
    return v;
}

}  // namespace

void MbrTree::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os.write(kMagic, sizeof(kMagic));
    write_pod(os, static_cast<std::uint32_t>(dimension_));
    write_pod(os, static_cast<std::uint32_t>(max_fanout_));
    write_pod(os, static_cast<std::uint64_t>(size_));
    for (const auto& e : entries()) {
        write_pod(os, static_cast<std::uint64_t>(e.id));
        os.write(reinterpret_cast<const char*>(e.point.data()),
                 static_cast<std::streamsize>(e.point.size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

MbrTree MbrTree::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open index snapshot '" + path.string() + "'");
    char magic[sizeof(kMagic)];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("'" + path.string() + "' is not an index snapshot");
    }
    const auto dims = read_pod<std::uint32_t>(is);
    const auto fanout = read_pod<std::uint32_t>(is);
    const auto count = read_pod<std::uint64_t>(is);
    std::vector<LeafEntry> points(count);
    for (auto& p : points) {
        p.id = read_pod<std::uint64_t>(is);
        p.point.resize(dims);
        is.read(reinterpret_cast<char*>(p.point.data()),
                static_cast<std::streamsize>(dims * sizeof(double)));
        if (!is) throw std::runtime_error("truncated index snapshot");
    }
    MbrTree tree = build(std::move(points), fanout);
    if (tree.empty()) tree.dimension_ = dims;
    return tree;
}

// ---------------------------------------------------------------------------
// NearestIterator

bool NearestIterator::Later::operator()(const Item& a, const Item& b) const noexcept {
    if (a.distance != b.distance) return a.distance > b.distance;
    // Nodes first at equal distance, so no smaller-id entry can hide behind
    // an already returned one.
    const bool a_entry = a.entry != nullptr;
    const bool b_entry = b.entry != nullptr;
    if (a_entry != b_entry) return a_entry;
    if (a_entry) return a.entry->id > b.entry->id;
    return false;
}

NearestIterator::NearestIterator(const MbrTree& tree, std::span<const double> query,
                                 RegionPolicy bound)
    : query_(query.begin(), query.end()), weight_(coefficient_weight(bound)) {
    if (tree.root() == nullptr) return;
    if (query.size() != tree.dimension()) {
        throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                    " does not match index dimension " +
                                    std::to_string(tree.dimension()));
    }
    heap_.push(Item{bound_of(tree.root()->mbr), tree.root(), nullptr});
}

double NearestIterator::bound_of(const Mbr& box) const noexcept {
    return std::sqrt(weight_ * box.min_distance_squared(query_));
}

std::optional<Neighbor> NearestIterator::next() {
    while (!heap_.empty()) {
        const Item top = heap_.top();
        heap_.pop();
        if (top.entry != nullptr) return Neighbor{top.entry->id, top.distance};
        ++stats_.nodes_touched;
        const MbrNode& node = *top.node;
        if (node.is_leaf) {
            for (const auto& e : node.entries) {
                heap_.push(Item{weighted_coord_distance(e.point, query_, weight_), nullptr, &e});
            }
        } else {
            for (const auto& c : node.children) heap_.push(Item{bound_of(c->mbr), c.get(), nullptr});
        }
    }
    return std::nullopt;
}

double NearestIterator::peek_bound() const noexcept {
    return heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.top().distance;
}

}  // namespace dftidx
