#include "dftidx/bench_sweep.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

namespace dftidx {

SweepKind parse_sweep(const std::string& name) {
    if (name == "threshold") return SweepKind::Threshold;
    if (name == "k") return SweepKind::Coefficients;
    if (name == "count") return SweepKind::Count;
    if (name == "length") return SweepKind::Length;
    throw std::invalid_argument("unknown sweep '" + name + "' (threshold|k|count|length)");
}

QueryMode parse_mode(const std::string& name) {
    if (name == "range") return QueryMode::Range;
    if (name == "join") return QueryMode::Join;
    if (name == "knn") return QueryMode::Knn;
    throw std::invalid_argument("unknown query mode '" + name + "' (range|join|knn)");
}

std::string_view to_string(SweepKind kind) noexcept {
    switch (kind) {
        case SweepKind::Threshold: return "threshold";
        case SweepKind::Coefficients: return "k";
        case SweepKind::Count: return "count";
        case SweepKind::Length: return "length";
    }
    return "?";
}

std::string_view to_string(QueryMode mode) noexcept {
    switch (mode) {
        case QueryMode::Range: return "range";
        case QueryMode::Join: return "join";
        case QueryMode::Knn: return "knn";
    }
    return "?";
}

namespace {

struct PointSetup {
    std::vector<TimeSequence> data;
    std::size_t k;
    double eps_frac;
    std::string status = "ok";
};

std::size_t as_count(double v) {
    if (!(v >= 1.0) || v != std::floor(v)) {
        throw std::invalid_argument("sweep value " + format_double(v) + " is not a positive integer");
    }
    return static_cast<std::size_t>(v);
}

// Builds the dataset and parameters for one sweep value. Returns a status
// beginning with "skipped" when the value does not fit the dataset.
PointSetup setup_point(const BenchConfig& cfg, const std::vector<TimeSequence>& base,
                       SweepKind sweep, double value) {
    PointSetup p{base, cfg.k, cfg.eps_frac};
    switch (sweep) {
        case SweepKind::Threshold:
            if (!(value > 0.0)) return {{}, p.k, value, "skipped: threshold must be positive"};
            p.eps_frac = value;
            break;
        case SweepKind::Coefficients:
            p.k = as_count(value);
            break;
        case SweepKind::Count: {
            const auto n = as_count(value);
            if (n > base.size()) {
                return {{}, p.k, p.eps_frac,
                        "skipped: dataset has only " + std::to_string(base.size()) + " sequences"};
            }
            p.data.resize(n);
            break;
        }
        case SweepKind::Length: {
            const auto len = as_count(value);
            if (cfg.dataset.empty() && cfg.generator) {
                GenSpec spec = *cfg.generator;
                spec.length = len;
                p.data = generate(spec, cfg.exec);
            } else {
                if (base.empty() || len > base.front().length()) {
                    return {{}, p.k, p.eps_frac, "skipped: sequences shorter than requested length"};
                }
                for (auto& s : p.data) s.values.resize(len);
            }
            break;
        }
    }
    if (!p.data.empty() && min_length_for(p.k) > p.data.front().length()) {
        return {{}, p.k, p.eps_frac,
                "skipped: k = " + std::to_string(p.k) + " too large for length " +
                    std::to_string(p.data.front().length())};
    }
    if (cfg.mode == QueryMode::Join && p.data.size() > cfg.join_cap) {
        p.data.resize(cfg.join_cap);
        p.status = "ok: capped to " + std::to_string(cfg.join_cap) + " sequences";
    }
    return p;
}

struct Totals {
    std::size_t answers = 0;
    std::size_t candidates = 0;
    std::size_t false_positives = 0;
    std::size_t nodes = 0;
    std::int64_t elapsed = 0;
};

Totals run_queries(const Engine& engine, const BenchConfig& cfg, RegionPolicy policy,
                   double epsilon, const std::vector<EntryId>& queries) {
    if (cfg.mode == QueryMode::Join) {
        const auto r = engine.all_pairs(epsilon, policy);
        return {r.answer_count(), r.candidates, r.false_positives, r.nodes_touched,
                cfg.timing ? r.elapsed_micros : 0};
    }
    std::vector<QueryReport> reports(queries.size());
    std::exception_ptr failure;
    auto run_one = [&](std::size_t i) {
        const auto& q = engine.store().at(queries[i]).raw;
        reports[i] = cfg.mode == QueryMode::Range ? engine.range_query(q, epsilon, policy)
                                                  : engine.knn_query(q, cfg.k_out, policy);
    };
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
    if (cfg.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                run_one(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(bench_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
    }
    if (failure) std::rethrow_exception(failure);
    Totals t;
    for (const auto& r : reports) {
        t.answers += r.answer_count();
        t.candidates += r.candidates;
        t.false_positives += r.false_positives;
        t.nodes += r.nodes_touched;
        t.elapsed += cfg.timing ? r.elapsed_micros : 0;
    }
    return t;
}

}  // namespace

std::vector<SweepRow> bench_sweep(const BenchConfig& config, SweepKind sweep,
                                  std::span<const double> values) {
    if (config.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (!(config.eps_frac > 0.0)) throw std::invalid_argument("threshold fraction must be positive");
    if (config.policies.empty()) throw std::invalid_argument("no policies to run");
    if (config.dataset.empty() && !config.generator) {
        throw std::invalid_argument("bench needs a dataset or a generator");
    }
    const std::vector<TimeSequence> base =
        config.dataset.empty() ? generate(*config.generator, config.exec) : config.dataset;

    std::vector<SweepRow> rows;
    for (std::size_t point = 0; point < values.size(); ++point) {
        const double value = values[point];
        SweepRow templ;
        templ.sweep = sweep;
        templ.value = value;
        templ.mode = config.mode;

        PointSetup setup;
        try {
            setup = setup_point(config, base, sweep, value);
        } catch (const std::invalid_argument& e) {
            setup = {{}, config.k, config.eps_frac, std::string("skipped: ") + e.what()};
        }
        templ.k = setup.k;
        templ.eps_frac = setup.eps_frac;
        if (setup.status.starts_with("skipped")) {
            for (auto policy : config.policies) {
                SweepRow r = templ;
                r.policy = policy;
                r.status = setup.status;
                rows.push_back(r);
            }
            continue;
        }

        const Engine engine =
            Engine::index_dataset(setup.data, {setup.k, config.max_fanout, config.exec});
        templ.length = engine.sequence_length();
        templ.count = engine.size();
        if (engine.size() == 0) {
            for (auto policy : config.policies) {
                SweepRow r = templ;
                r.policy = policy;
                r.status = "skipped: no indexable sequences";
                rows.push_back(r);
            }
            continue;
        }
        templ.epsilon = setup.eps_frac * engine.max_amp();

        std::vector<EntryId> queries;
        if (config.mode != QueryMode::Join) {
            std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                              static_cast<std::uint32_t>(config.seed >> 32),
                              static_cast<std::uint32_t>(point)};
            std::mt19937_64 rng(seq);
            std::uniform_int_distribution<EntryId> pick(0, engine.size() - 1);
            for (std::size_t i = 0; i < config.repetitions; ++i) queries.push_back(pick(rng));
        }
        const double nq = config.mode == QueryMode::Join ? 1.0 : static_cast<double>(queries.size());

        std::map<RegionPolicy, Totals> totals;
        for (auto policy : config.policies) {
            const Totals t = run_queries(engine, config, policy, templ.epsilon, queries);
            totals[policy] = t;
            SweepRow r = templ;
            r.policy = policy;
            r.status = setup.status;
            r.queries = config.mode == QueryMode::Join ? 1 : queries.size();
            r.mean_answers = static_cast<double>(t.answers) / nq;
            r.mean_candidates = static_cast<double>(t.candidates) / nq;
            r.mean_false_positives = static_cast<double>(t.false_positives) / nq;
            r.mean_nodes_touched = static_cast<double>(t.nodes) / nq;
            r.mean_elapsed_us = static_cast<double>(t.elapsed) / nq;
            rows.push_back(r);
        }

        if (totals.contains(RegionPolicy::Baseline) && totals.contains(RegionPolicy::Symmetric)) {
            const auto& b = totals[RegionPolicy::Baseline];
            const auto& s = totals[RegionPolicy::Symmetric];
            for (auto it = rows.end() - static_cast<std::ptrdiff_t>(config.policies.size());
                 it != rows.end(); ++it) {
                if (b.answers != s.answers) it->status = "error: policies disagree on answers";
                if (it->policy != RegionPolicy::Symmetric) continue;
                if (b.candidates > 0) {
                    it->candidate_reduction_pct =
                        100.0 * (1.0 - static_cast<double>(s.candidates) /
                                           static_cast<double>(b.candidates));
                }
                if (b.nodes > 0) {
                    it->node_reduction_pct =
                        100.0 * (1.0 - static_cast<double>(s.nodes) / static_cast<double>(b.nodes));
                }
            }
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "sweep,value,mode,policy,k,length,count,eps_frac,epsilon,queries,mean_answers,"
           "mean_candidates,mean_false_positives,mean_nodes_touched,mean_elapsed_us,"
           "candidate_reduction_pct,node_reduction_pct,status\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        out << to_string(r.sweep) << ',' << format_double(r.value) << ',' << to_string(r.mode)
            << ',' << to_string(r.policy) << ',' << r.k << ',' << r.length << ',' << r.count << ','
            << format_double(r.eps_frac) << ',' << format_double(r.epsilon) << ',' << r.queries
            << ',' << format_double(r.mean_answers) << ',' << format_double(r.mean_candidates)
            << ',' << format_double(r.mean_false_positives) << ','
            << format_double(r.mean_nodes_touched) << ',' << format_double(r.mean_elapsed_us)
            << ',' << opt(r.candidate_reduction_pct) << ',' << opt(r.node_reduction_pct) << ','
            << r.status << '\n';
    }
}

}  // namespace dftidx
