// Command-line front end: dataset generation and ingest, index build, range /
// kNN / all-pair queries, the selectivity model and the benchmark sweeps.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dftidx/bench_sweep.hpp"
#include "dftidx/datagen.hpp"
#include "dftidx/engine.hpp"
#include "dftidx/selectivity.hpp"

using namespace dftidx;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("DFTIDX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("DFTIDX_SEED is not an integer: ") + env);
        }
    }
    return 1;
}

GenKind parse_kind(const std::string& name) {
    if (name == "random_walk") return GenKind::RandomWalk;
    if (name == "spectral_noise") return GenKind::SpectralNoise;
    throw std::invalid_argument("unknown generator '" + name + "'");
}

std::vector<RegionPolicy> parse_policies(const std::string& name) {
    if (name == "both") return {RegionPolicy::Baseline, RegionPolicy::Symmetric};
    return {parse_policy(name)};
}

Execution parse_exec(bool serial) { return serial ? Execution::Serial : Execution::Parallel; }

// Opens `path` for writing, or returns nullptr for "-" / empty.
std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;
    auto out = std::make_unique<std::ofstream>(path, std::ios::trunc);
    if (!*out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

struct Threshold {
    std::optional<double> eps;
    std::optional<double> eps_frac;

    // Validated before any snapshot is read.
    void check() const {
        if (eps.has_value() == eps_frac.has_value()) {
            throw std::invalid_argument("give exactly one of --eps or --eps-frac");
        }
        const double v = eps ? *eps : *eps_frac;
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("threshold must be positive");
    }
    double resolve(const Engine& engine) const { return eps ? *eps : *eps_frac * engine.max_amp(); }
};

struct QuerySource {
    std::string id;
    std::string file;

    TimeSequence load(const Engine& engine) const {
        if (id.empty() == file.empty()) {
            throw std::invalid_argument("give exactly one of --query-id or --query-file");
        }
        if (!id.empty()) {
            const auto entry = engine.store().find(id);
            if (!entry) throw std::invalid_argument("no stored sequence with id '" + id + "'");
            return engine.store().at(*entry).raw;
        }
        const auto parsed = ingest_csv(file, {});
        if (parsed.sequences.empty()) throw std::invalid_argument("query file holds no sequence");
        return parsed.sequences.front();
    }
};

void print_report(const QueryReport& r) {
    const std::string scope =
        r.kind == QueryKind::Knn ? "" : ", epsilon " + format_double(r.epsilon);
    std::printf("%s query, policy %s%s: %zu answers, %zu candidates, %zu false positives, "
                "%zu nodes touched, %lld us\n",
                std::string(to_string(r.kind)).c_str(), std::string(to_string(r.policy)).c_str(),
                scope.c_str(), r.answer_count(), r.candidates, r.false_positives, r.nodes_touched,
                static_cast<long long>(r.elapsed_micros));
    if (r.k_exceeds_dataset) std::printf("  note: k exceeds dataset size, returning all sequences\n");
    for (const auto& m : r.answers) std::printf("  %s %s\n", m.id.c_str(), format_double(m.distance).c_str());
    for (const auto& p : r.pairs) {
        std::printf("  %s %s %s\n", p.first.c_str(), p.second.c_str(), format_double(p.distance).c_str());
    }
}

void write_reports(const std::string& path, const std::vector<QueryReport>& reports) {
    if (path.empty()) return;
    auto file = open_out(path);
    std::ostream& out = file ? *file : std::cout;
    out << report_csv_header() << '\n';
    for (const auto& r : reports) out << to_csv_row(r) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DFT feature index for time-sequence similarity queries"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    bool serial = false;
    app.add_flag("--serial", serial, "Run kernels on the serial reference path");

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
    std::string gen_kind = "random_walk", gen_out, gen_layout = "rows";
    GenSpec gen_spec;
    gen->add_option("--kind", gen_kind, "random_walk or spectral_noise")->capture_default_str();
    gen->add_option("--count", gen_spec.count, "Number of sequences")->required();
    gen->add_option("--length", gen_spec.length, "Sequence length")->capture_default_str();
    gen->add_option("--seed", seed, "Seed (default $DFTIDX_SEED or 1)");
    gen->add_option("--step-bound", gen_spec.step_bound, "Random walk step bound B")->capture_default_str();
    gen->add_option("--exponent", gen_spec.exponent, "Spectral exponent b")->capture_default_str();
    gen->add_option("--layout", gen_layout, "rows or long")->capture_default_str();
    gen->add_option("-o,--out", gen_out, "Output CSV")->required();

    // ingest
    auto* ing = app.add_subcommand("ingest", "Validate a CSV dataset and rewrite it in row layout");
    std::string ing_in, ing_out, ing_layout = "rows";
    IngestOptions ing_opts;
    ing->add_option("-i,--in", ing_in, "Input CSV")->required();
    ing->add_option("--layout", ing_layout, "rows or long")->capture_default_str();
    ing->add_option("--min-length", ing_opts.min_length, "Reject sequences shorter than this");
    ing->add_flag("--truncate-to-min", ing_opts.truncate_to_min, "Cut ragged sequences to a common length");
    ing->add_option("-o,--out", ing_out, "Output CSV")->required();

    // build
    auto* build = app.add_subcommand("build", "Index a dataset and write a snapshot");
    std::string build_data, build_layout = "rows", build_prefix;
    EngineOptions build_opts;
    build->add_option("-d,--data", build_data, "Dataset CSV")->required();
    build->add_option("--layout", build_layout, "rows or long")->capture_default_str();
    build->add_option("-k,--coefficients", build_opts.k, "Stored DFT coefficients")->capture_default_str();
    build->add_option("--fanout", build_opts.max_fanout, "Index node capacity")->capture_default_str();
    build->add_option("--index", build_prefix, "Snapshot prefix")->required();

    // range
    auto* range = app.add_subcommand("range", "Range query against a snapshot");
    std::string range_prefix, range_policy = "symmetric", range_csv;
    Threshold range_eps;
    QuerySource range_q;
    range->add_option("--index", range_prefix, "Snapshot prefix")->required();
    range->add_option("--eps", range_eps.eps, "Distance threshold");
    range->add_option("--eps-frac", range_eps.eps_frac, "Threshold as a fraction of MaxAmp");
    range->add_option("--policy", range_policy, "baseline, symmetric or both")->capture_default_str();
    range->add_option("--query-id", range_q.id, "Query with a stored sequence");
    range->add_option("--query-file", range_q.file, "Query with the first sequence of a CSV");
    range->add_option("--csv", range_csv, "Write report rows to this CSV ('-' for stdout)");

    // knn
    auto* knn = app.add_subcommand("knn", "k-nearest-neighbour query against a snapshot");
    std::string knn_prefix, knn_bound = "symmetric", knn_csv;
    std::size_t knn_k = 10;
    QuerySource knn_q;
    knn->add_option("--index", knn_prefix, "Snapshot prefix")->required();
    knn->add_option("--k-out", knn_k, "Neighbours to return")->capture_default_str();
    knn->add_option("--bound", knn_bound, "Traversal bound: baseline or symmetric")->capture_default_str();
    knn->add_option("--query-id", knn_q.id, "Query with a stored sequence");
    knn->add_option("--query-file", knn_q.file, "Query with the first sequence of a CSV");
    knn->add_option("--csv", knn_csv, "Report CSV ('-' for stdout)");

    // join
    auto* join = app.add_subcommand("join", "All pairs within a threshold");
    std::string join_prefix, join_policy = "symmetric", join_csv;
    Threshold join_eps;
    join->add_option("--index", join_prefix, "Snapshot prefix")->required();
    join->add_option("--eps", join_eps.eps, "Distance threshold");
    join->add_option("--eps-frac", join_eps.eps_frac, "Threshold as a fraction of MaxAmp");
    join->add_option("--policy", join_policy, "baseline, symmetric or both")->capture_default_str();
    join->add_option("--csv", join_csv, "Report CSV ('-' for stdout)");

    // selectivity
    auto* sel = app.add_subcommand("selectivity", "Analytical selectivity curves as CSV");
    double sel_b = 1.0;
    std::size_t sel_k = 2;
    std::string sel_grid = "0.05:0.5:0.05", sel_out = "-";
    std::uint64_t sel_samples = 0;
    sel->add_option("--b", sel_b, "Spectral exponent")->capture_default_str();
    sel->add_option("-k,--coefficients", sel_k, "Stored coefficients")->capture_default_str();
    sel->add_option("--eps-grid", sel_grid, "start:stop:step or comma list")->capture_default_str();
    sel->add_option("--monte-carlo", sel_samples, "Also check each worst-case value with this many samples");
    sel->add_option("--seed", seed, "Monte Carlo seed (default $DFTIDX_SEED or 1)");
    sel->add_option("-o,--out", sel_out, "Output CSV ('-' for stdout)")->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Seeded symmetric-vs-baseline sweep");
    std::string bench_sweep_name = "threshold", bench_values, bench_mode = "range", bench_data,
                bench_policy = "both", bench_out = "-", bench_kind = "random_walk";
    BenchConfig cfg;
    GenSpec bench_gen;
    bench_gen.count = 1000;
    bool no_timing = false;
    bench->add_option("--sweep", bench_sweep_name, "threshold, k, count or length")->capture_default_str();
    bench->add_option("--values", bench_values, "Sweep values: start:stop:step or comma list")->required();
    bench->add_option("--mode", bench_mode, "range, join or knn")->capture_default_str();
    bench->add_option("-d,--data", bench_data, "Dataset CSV (default: generated)");
    bench->add_option("--kind", bench_kind, "Generator when no dataset is given")->capture_default_str();
    bench->add_option("--count", bench_gen.count, "Generated sequences")->capture_default_str();
    bench->add_option("--length", bench_gen.length, "Generated length")->capture_default_str();
    bench->add_option("--exponent", bench_gen.exponent, "Spectral exponent")->capture_default_str();
    bench->add_option("-k,--coefficients", cfg.k, "Stored coefficients")->capture_default_str();
    bench->add_option("--eps-frac", cfg.eps_frac, "Threshold as a fraction of MaxAmp")->capture_default_str();
    bench->add_option("--reps", cfg.repetitions, "Queries per sweep point")->capture_default_str();
    bench->add_option("--k-out", cfg.k_out, "Neighbours for knn mode")->capture_default_str();
    bench->add_option("--policy", bench_policy, "baseline, symmetric or both")->capture_default_str();
    bench->add_option("--fanout", cfg.max_fanout, "Index node capacity")->capture_default_str();
    bench->add_option("--join-cap", cfg.join_cap, "Max sequences in join mode")->capture_default_str();
    bench->add_option("--seed", seed, "Seed (default $DFTIDX_SEED or 1)");
    bench->add_flag("--no-timing", no_timing, "Write 0 for elapsed time (reproducible output)");
    bench->add_option("-o,--out", bench_out, "Output CSV ('-' for stdout)")->capture_default_str();

    try {
        seed = default_seed();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    CLI11_PARSE(app, argc, argv);
    const Execution exec = parse_exec(serial);

    try {
        if (*gen) {
            gen_spec.kind = parse_kind(gen_kind);
            gen_spec.seed = seed;
            const auto layout = parse_layout(gen_layout);
            const auto seqs = generate(gen_spec, exec);
            export_csv(gen_out, seqs, layout);
            std::printf("wrote %zu sequences of length %zu to %s\n", seqs.size(), gen_spec.length,
                        gen_out.c_str());
        } else if (*ing) {
            ing_opts.layout = parse_layout(ing_layout);
            const auto result = ingest_csv(ing_in, ing_opts);
            for (const auto& r : result.rejected) {
                std::fprintf(stderr, "rejected %s: %s\n", r.id.c_str(), r.reason.c_str());
            }
            export_csv(ing_out, result.sequences, CsvLayout::Rows);
            std::printf("kept %zu sequences, rejected %zu\n", result.sequences.size(),
                        result.rejected.size());
        } else if (*build) {
            IngestOptions opts;
            opts.layout = parse_layout(build_layout);
            const auto data = ingest_csv(build_data, opts);
            for (const auto& r : data.rejected) {
                std::fprintf(stderr, "rejected %s: %s\n", r.id.c_str(), r.reason.c_str());
            }
            build_opts.exec = exec;
            const auto engine = Engine::index_dataset(data.sequences, build_opts);
            for (const auto& s : engine.skipped()) {
                std::fprintf(stderr, "skipped %s: %s\n", s.id.c_str(), s.reason.c_str());
            }
            if (engine.size() == 0) throw std::runtime_error("no indexable sequences");
            engine.save(build_prefix);
            std::printf("indexed %zu sequences of length %zu, k = %zu, height %zu, MaxAmp %s\n",
                        engine.size(), engine.sequence_length(), engine.k(), engine.index().height(),
                        format_double(engine.max_amp()).c_str());
        } else if (*range) {
            range_eps.check();
            const auto policies = parse_policies(range_policy);
            const auto engine = Engine::load(range_prefix, exec);
            const auto q = range_q.load(engine);
            const double eps = range_eps.resolve(engine);
            std::vector<QueryReport> reports;
            for (auto p : policies) {
                reports.push_back(engine.range_query(q, eps, p));
                print_report(reports.back());
            }
            write_reports(range_csv, reports);
        } else if (*knn) {
            if (knn_k == 0) throw std::invalid_argument("--k-out must be at least 1");
            const auto bound = parse_policy(knn_bound);
            const auto engine = Engine::load(knn_prefix, exec);
            const auto report = engine.knn_query(knn_q.load(engine), knn_k, bound);
            print_report(report);
            write_reports(knn_csv, {report});
        } else if (*join) {
            join_eps.check();
            const auto policies = parse_policies(join_policy);
            const auto engine = Engine::load(join_prefix, exec);
            const double eps = join_eps.resolve(engine);
            std::vector<QueryReport> reports;
            for (auto p : policies) {
                reports.push_back(engine.all_pairs(eps, p));
                print_report(reports.back());
            }
            write_reports(join_csv, reports);
        } else if (*sel) {
            const auto grid = parse_grid(sel_grid);
            const auto rows = selectivity_curve(sel_b, sel_k, grid);
            auto file = open_out(sel_out);
            write_selectivity_csv(file ? *file : std::cout, sel_b, sel_k, rows);
            if (sel_samples > 0) {
                for (const auto& row : rows) {
                    const SelectivityParams p{sel_b, sel_k, std::sqrt(2.0) * row.epsilon};
                    const auto est = monte_carlo_selectivity(p, QueryPosition::Worst, sel_samples, seed, exec);
                    std::fprintf(stderr, "eps %s: closed form %s, sampled %s +/- %s\n",
                                 format_double(row.epsilon).c_str(),
                                 format_double(row.worst_symmetric).c_str(),
                                 format_double(est.estimate).c_str(),
                                 format_double(est.std_error).c_str());
                }
            }
        } else if (*bench) {
            const auto sweep = parse_sweep(bench_sweep_name);
            cfg.mode = parse_mode(bench_mode);
            cfg.policies = parse_policies(bench_policy);
            cfg.seed = seed;
            cfg.timing = !no_timing;
            cfg.exec = exec;
            if (!bench_data.empty()) {
                auto data = ingest_csv(bench_data, {});
                cfg.dataset = std::move(data.sequences);
            } else {
                bench_gen.kind = parse_kind(bench_kind);
                bench_gen.seed = seed;
                cfg.generator = bench_gen;
            }
            const auto values = parse_grid(bench_values);
            const auto rows = bench_sweep(cfg, sweep, values);
            auto file = open_out(bench_out);
            write_sweep_csv(file ? *file : std::cout, rows);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
