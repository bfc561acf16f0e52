#include "dftidx/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "dftidx/datagen.hpp"

namespace dftidx {

// ---------------------------------------------------------------------------
// SequenceStore

EntryId SequenceStore::add(TimeSequence raw, const TimeSequence& normalized,
                           NormalizationParams norm) {
    if (items_.empty()) {
        length_ = raw.length();
    } else if (raw.length() != length_) {
        throw std::invalid_argument("sequence '" + raw.id + "' has length " +
                                    std::to_string(raw.length()) + ", expected " +
                                    std::to_string(length_));
    }
    if (by_name_.contains(raw.id)) {
        throw std::invalid_argument("duplicate sequence id '" + raw.id + "'");
    }
    const auto id = static_cast<EntryId>(items_.size());
    by_name_.emplace(raw.id, id);
    normalized_.insert(normalized_.end(), normalized.values.begin(), normalized.values.end());
    items_.push_back({std::move(raw), norm});
    return id;
}

std::optional<EntryId> SequenceStore::find(const std::string& id) const {
    const auto it = by_name_.find(id);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::span<const double> SequenceStore::normalized(EntryId id) const {
    if (id >= items_.size()) throw std::out_of_range("entry id out of range");
    return std::span<const double>(normalized_).subspan(id * length_, length_);
}

std::vector<TimeSequence> SequenceStore::raw_sequences() const {
    std::vector<TimeSequence> out;
    out.reserve(items_.size());
    for (const auto& s : items_) out.push_back(s.raw);
    return out;
}

// ---------------------------------------------------------------------------
// QueryReport

std::string_view to_string(QueryKind kind) noexcept {
    switch (kind) {
        case QueryKind::Range: return "range";
        case QueryKind::Knn: return "knn";
        case QueryKind::Join: return "join";
    }
    return "?";
}

std::string report_csv_header() {
    return "policy,epsilon,answers,candidates,false_positives,nodes_touched,elapsed_micros";
}

std::string to_csv_row(const QueryReport& report) {
    std::ostringstream os;
    os << to_string(report.policy) << ',' << format_double(report.epsilon) << ','
       << report.answer_count() << ',' << report.candidates << ',' << report.false_positives
       << ',' << report.nodes_touched << ',' << report.elapsed_micros;
    return os.str();
}

// ---------------------------------------------------------------------------
// Engine

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be positive and finite");
    }
}

}  // namespace

Engine Engine::index_dataset(std::span<const TimeSequence> seqs, EngineOptions options) {
    if (options.k == 0) throw std::invalid_argument("k must be at least 1");
    Engine engine;
    engine.k_ = options.k;
    engine.index_ = MbrTree(2 * options.k, options.max_fanout);
    if (seqs.empty()) return engine;

    const std::size_t n = seqs.front().length();
    for (const auto& s : seqs) {
        if (s.length() != n) {
            throw std::invalid_argument("inconsistent sequence lengths: '" + s.id + "' has " +
                                        std::to_string(s.length()) + ", expected " +
                                        std::to_string(n));
        }
    }
    if (min_length_for(options.k) > n) {
        throw std::invalid_argument("k = " + std::to_string(options.k) +
                                    " too large for length " + std::to_string(n) +
                                    " (need 2k+1 <= n)");
    }

    auto batch = extract_feature_batch(seqs, options.k, options.exec);
    std::vector<LeafEntry> points;
    points.reserve(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (!batch.errors[i].empty()) {
            engine.skipped_.push_back({seqs[i].id, batch.errors[i]});
            continue;
        }
        const auto id = engine.store_.add(seqs[i], batch.normalized[i], batch.features[i].norm);
        points.push_back({batch.features[i].coords, id});
        engine.features_.push_back(std::move(batch.features[i]));
    }
    engine.index_ = MbrTree::build(std::move(points), options.max_fanout);
    if (engine.index_.empty()) engine.index_ = MbrTree(2 * options.k, options.max_fanout);
    return engine;
}

std::pair<TimeSequence, SpectrumFeature> Engine::prepare_query(const TimeSequence& q) const {
    if (!store_.empty() && q.length() != store_.sequence_length()) {
        throw std::invalid_argument("query length " + std::to_string(q.length()) +
                                    " does not match indexed length " +
                                    std::to_string(store_.sequence_length()));
    }
    auto [normalized, params] = normalize(q);
    auto feature = features_of_normalized(normalized, k_, params);
    return {std::move(normalized), std::move(feature)};
}

QueryReport Engine::range_query(const TimeSequence& q, double epsilon, RegionPolicy policy) const {
    require_epsilon(epsilon);
    const auto start = Clock::now();
    QueryReport report;
    report.kind = QueryKind::Range;
    report.policy = policy;
    report.epsilon = epsilon;
    if (store_.empty()) return report;

    const auto [normalized, feature] = prepare_query(q);
    const auto filtered = index_.range_search(make_region(feature, epsilon, policy));
    for (const EntryId id : filtered.ids) {
        const double d = true_distance(normalized.values, store_.normalized(id));
        if (d < epsilon) report.answers.push_back({store_.at(id).raw.id, d});
    }
    std::sort(report.answers.begin(), report.answers.end(), [](const Match& a, const Match& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    });
    report.candidates = filtered.stats.candidates;
    report.nodes_touched = filtered.stats.nodes_touched;
    report.false_positives = report.candidates - report.answers.size();
    report.elapsed_micros = micros_since(start);
    return report;
}

QueryReport Engine::knn_query(const TimeSequence& q, std::size_t k_out, RegionPolicy bound) const {
    if (k_out == 0) throw std::invalid_argument("k_out must be at least 1");
    const auto start = Clock::now();
    QueryReport report;
    report.kind = QueryKind::Knn;
    report.policy = bound;
    if (k_out > store_.size()) {
        report.k_exceeds_dataset = true;
        k_out = store_.size();
    }
    if (store_.empty()) return report;

    const auto [normalized, feature] = prepare_query(q);
    struct Refined {
        double distance;
        const std::string* name;
    };
    // Min-heap on (true distance, id).
    auto later = [](const Refined& a, const Refined& b) {
        return a.distance != b.distance ? a.distance > b.distance : *a.name > *b.name;
    };
    std::priority_queue<Refined, std::vector<Refined>, decltype(later)> refined(later);

    NearestIterator it(index_, feature.coords, bound);
    while (report.answers.size() < k_out) {
        // Finalize refined candidates that no unexplored entry can beat.
        while (!refined.empty() && report.answers.size() < k_out &&
               refined.top().distance < it.peek_bound()) {
            report.answers.push_back({*refined.top().name, refined.top().distance});
            refined.pop();
        }
        if (report.answers.size() >= k_out) break;
        const auto next = it.next();
        if (!next) {
            while (!refined.empty() && report.answers.size() < k_out) {
                report.answers.push_back({*refined.top().name, refined.top().distance});
                refined.pop();
            }
            break;
        }
        ++report.candidates;
        const double d = true_distance(normalized.values, store_.normalized(next->id));
        refined.push({d, &store_.at(next->id).raw.id});
    }
    report.nodes_touched = it.stats().nodes_touched;
    report.false_positives = report.candidates - report.answers.size();
    report.elapsed_micros = micros_since(start);
    return report;
}

QueryReport Engine::all_pairs(double epsilon, RegionPolicy policy) const {
    require_epsilon(epsilon);
    const auto start = Clock::now();
    QueryReport report;
    report.kind = QueryKind::Join;
    report.policy = policy;
    report.epsilon = epsilon;
    if (store_.empty()) return report;

    const auto joined = index_.join(index_, epsilon, policy);
    struct Hit {
        EntryId a;
        EntryId b;
        double distance;
    };
    std::vector<Hit> hits;
    for (const auto& [a, b] : joined.pairs) {
        const double d = true_distance(store_.normalized(a), store_.normalized(b));
        if (d < epsilon) hits.push_back({a, b, d});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
        if (x.distance != y.distance) return x.distance < y.distance;
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    report.pairs.reserve(hits.size());
    for (const auto& h : hits) {
        report.pairs.push_back({store_.at(h.a).raw.id, store_.at(h.b).raw.id, h.distance});
    }
    report.candidates = joined.stats.candidates;
    report.nodes_touched = joined.stats.nodes_touched;
    report.false_positives = report.candidates - report.pairs.size();
    report.elapsed_micros = micros_since(start);
    return report;
}

double Engine::max_amp() const {
    if (features_.empty()) throw std::invalid_argument("MaxAmp of an empty dataset");
    double best = 0.0;
    for (const auto& f : features_) best = std::max(best, std::hypot(f.coords[0], f.coords[1]));
    return best;
}

std::filesystem::path Engine::index_path(const std::filesystem::path& prefix) {
    return std::filesystem::path(prefix.string() + ".idx");
}

std::filesystem::path Engine::store_path(const std::filesystem::path& prefix) {
    return std::filesystem::path(prefix.string() + ".seq.csv");
}

void Engine::save(const std::filesystem::path& prefix) const {
    index_.save(index_path(prefix));
    const auto raw = store_.raw_sequences();
    export_csv(store_path(prefix), raw, CsvLayout::Rows);
}

Engine Engine::load(const std::filesystem::path& prefix, Execution exec) {
    auto tree = MbrTree::load(index_path(prefix));
    if (tree.dimension() == 0 || tree.dimension() % 2 != 0) {
        throw std::runtime_error("index snapshot has invalid dimension " +
                                 std::to_string(tree.dimension()));
    }
    const auto ingested = ingest_csv(store_path(prefix), IngestOptions{});
    const std::size_t k = tree.dimension() / 2;

    Engine engine;
    engine.k_ = k;
    auto batch = extract_feature_batch(ingested.sequences, k, exec);
    for (std::size_t i = 0; i < ingested.sequences.size(); ++i) {
        if (!batch.errors[i].empty()) {
            throw std::runtime_error("stored sequence '" + ingested.sequences[i].id +
                                     "' cannot be indexed: " + batch.errors[i]);
        }
        engine.store_.add(ingested.sequences[i], batch.normalized[i], batch.features[i].norm);
        engine.features_.push_back(std::move(batch.features[i]));
    }
    // The snapshot must describe exactly the stored sequences.
    const auto entries = tree.entries();
    if (entries.size() != engine.features_.size()) {
        throw std::runtime_error("index snapshot and sequence store disagree on entry count");
    }
    for (const auto& e : entries) {
        if (e.id >= engine.features_.size() || e.point != engine.features_[e.id].coords) {
            throw std::runtime_error("index snapshot entry " + std::to_string(e.id) +
                                     " does not match the stored sequence");
        }
    }
    engine.index_ = std::move(tree);
    return engine;
}

}  // namespace dftidx
