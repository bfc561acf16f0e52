#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "dftidx/datagen.hpp"
#include "dftidx/engine.hpp"
#include "oracles.hpp"

using namespace dftidx;

namespace {

std::vector<TimeSequence> walks(std::size_t count, std::uint64_t seed = 1, std::size_t n = 128) {
    GenSpec spec;
    spec.count = count;
    spec.length = n;
    spec.seed = seed;
    return random_walk(spec);
}

struct Truth {
    std::vector<std::vector<double>> normalized;
    std::vector<std::string> names;

    explicit Truth(const std::vector<TimeSequence>& seqs) {
        for (const auto& s : seqs) {
            normalized.push_back(oracle::normalized(s.values));
            names.push_back(s.id);
        }
    }

    // (distance, name) for every sequence, ascending.
    std::vector<std::pair<double, std::string>> ranking(const TimeSequence& q) const {
        const auto nq = oracle::normalized(q.values);
        std::vector<std::pair<double, std::string>> out;
        for (std::size_t i = 0; i < names.size(); ++i) {
            out.emplace_back(oracle::distance(nq, normalized[i]), names[i]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::set<std::string> within(const TimeSequence& q, double eps) const {
        std::set<std::string> out;
        for (const auto& [d, name] : ranking(q)) {
            if (d < eps) out.insert(name);
        }
        return out;
    }
};

std::set<std::string> names_of(const QueryReport& r) {
    std::set<std::string> out;
    for (const auto& m : r.answers) out.insert(m.id);
    return out;
}

std::set<std::pair<std::string, std::string>> pairs_of(const QueryReport& r) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& p : r.pairs) out.insert(std::minmax(p.first, p.second));
    return out;
}

}  // namespace

TEST(IndexDataset, ThousandSixtySevenSequences) {
    const auto seqs = walks(1067);
    const auto engine = Engine::index_dataset(seqs, {.k = 2});
    EXPECT_EQ(engine.size(), 1067u);
    EXPECT_EQ(engine.index().size(), 1067u);
    EXPECT_EQ(engine.index().dimension(), 4u);
    EXPECT_TRUE(engine.skipped().empty());
    engine.index().check_invariants();
}

TEST(IndexDataset, ConstantSequenceSkipped) {
    auto seqs = walks(20);
    seqs[4].values.assign(128, 12.0);
    const auto engine = Engine::index_dataset(seqs);
    EXPECT_EQ(engine.size(), 19u);
    ASSERT_EQ(engine.skipped().size(), 1u);
    EXPECT_EQ(engine.skipped()[0].id, seqs[4].id);
    EXPECT_FALSE(engine.store().find(seqs[4].id).has_value());
}

TEST(IndexDataset, Deterministic) {
    const auto seqs = walks(300);
    const auto a = Engine::index_dataset(seqs, {.k = 3});
    const auto b = Engine::index_dataset(seqs, {.k = 3, .exec = Execution::Serial});
    ASSERT_EQ(a.features().size(), b.features().size());
    for (std::size_t i = 0; i < a.features().size(); ++i) {
        EXPECT_EQ(a.features()[i].coords, b.features()[i].coords);
    }
}

TEST(IndexDataset, Errors) {
    EXPECT_EQ(Engine::index_dataset({}).size(), 0u);
    auto seqs = walks(3);
    seqs[1].values.pop_back();
    EXPECT_THROW(Engine::index_dataset(seqs), std::invalid_argument);
    auto dup = walks(3);
    dup[2].id = dup[0].id;
    EXPECT_THROW(Engine::index_dataset(dup), std::invalid_argument);
    EXPECT_THROW(Engine::index_dataset(walks(3, 1, 8), {.k = 4}), std::invalid_argument);
}

TEST(RangeQuery, SelfAtZero) {
    const auto seqs = walks(200);
    const auto engine = Engine::index_dataset(seqs);
    for (auto policy : {RegionPolicy::Baseline, RegionPolicy::Symmetric}) {
        const auto r = engine.range_query(seqs[17], 1e-6, policy);
        ASSERT_FALSE(r.answers.empty());
        EXPECT_EQ(r.answers[0].id, seqs[17].id);
        EXPECT_LT(r.answers[0].distance, 1e-9);
    }
}

TEST(RangeQuery, HugeEpsilonReturnsAll) {
    const auto seqs = walks(150);
    const auto engine = Engine::index_dataset(seqs);
    // Normalized sequences of length n lie within 2 sqrt(n) of each other.
    const double eps = 2.0 * std::sqrt(128.0) + 1.0;
    const auto r = engine.range_query(seqs[0], eps, RegionPolicy::Symmetric);
    EXPECT_EQ(r.answers.size(), 150u);
    EXPECT_EQ(r.false_positives, 0u);
    EXPECT_EQ(r.candidates, 150u);
}

TEST(RangeQuery, MatchesBruteForceUnderBothPolicies) {
    const auto seqs = walks(1000, 3);
    const auto engine = Engine::index_dataset(seqs);
    const Truth truth(seqs);
    const double max_amp = engine.max_amp();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, seqs.size() - 1);
    std::uniform_real_distribution<double> frac(0.1, 1.0);
    for (int q = 0; q < 100; ++q) {
        const auto& query = seqs[pick(rng)];
        const double eps = frac(rng) * max_amp;
        const auto expected = truth.within(query, eps);
        const auto base = engine.range_query(query, eps, RegionPolicy::Baseline);
        const auto sym = engine.range_query(query, eps, RegionPolicy::Symmetric);
        EXPECT_EQ(names_of(base), expected);
        EXPECT_EQ(names_of(sym), expected);
        EXPECT_LE(sym.candidates, base.candidates);
        EXPECT_EQ(sym.false_positives, sym.candidates - sym.answers.size());
        for (std::size_t i = 1; i < sym.answers.size(); ++i) {
            EXPECT_LE(sym.answers[i - 1].distance, sym.answers[i].distance);
        }
        const auto nq = oracle::normalized(query.values);
        for (const auto& m : sym.answers) {
            const auto id = *engine.store().find(m.id);
            EXPECT_NEAR(m.distance, oracle::distance(nq, truth.normalized[id]), 1e-9);
        }
    }
}

TEST(RangeQuery, Rejections) {
    const auto seqs = walks(10);
    const auto engine = Engine::index_dataset(seqs);
    EXPECT_THROW(engine.range_query(seqs[0], 0.0, RegionPolicy::Symmetric), std::invalid_argument);
    EXPECT_THROW(engine.range_query(seqs[0], -1.0, RegionPolicy::Symmetric), std::invalid_argument);
    EXPECT_THROW(engine.range_query(TimeSequence{"c", std::vector<double>(128, 1.0)}, 1.0,
                                    RegionPolicy::Symmetric),
                 std::invalid_argument);
    EXPECT_THROW(engine.range_query(walks(1, 9, 64)[0], 1.0, RegionPolicy::Symmetric),
                 std::invalid_argument);
}

TEST(KnnQuery, SelfIsNearest) {
    const auto seqs = walks(300);
    const auto engine = Engine::index_dataset(seqs);
    const auto r = engine.knn_query(seqs[42], 1);
    ASSERT_EQ(r.answers.size(), 1u);
    EXPECT_EQ(r.answers[0].id, seqs[42].id);
    EXPECT_LT(r.answers[0].distance, 1e-9);
}

TEST(KnnQuery, MatchesBruteForceTopTen) {
    const auto seqs = walks(1000, 4);
    const auto engine = Engine::index_dataset(seqs);
    const Truth truth(seqs);
    const auto queries = walks(50, 77);
    for (const auto& q : queries) {
        const auto expected = truth.ranking(q);
        for (auto bound : {RegionPolicy::Symmetric, RegionPolicy::Baseline}) {
            const auto r = engine.knn_query(q, 10, bound);
            ASSERT_EQ(r.answers.size(), 10u);
            EXPECT_FALSE(r.k_exceeds_dataset);
            for (std::size_t i = 0; i < 10; ++i) {
                EXPECT_EQ(r.answers[i].id, expected[i].second);
                EXPECT_NEAR(r.answers[i].distance, expected[i].first, 1e-9);
            }
            EXPECT_GE(r.candidates, 10u);
            EXPECT_LT(r.candidates, seqs.size());
        }
    }
}

TEST(KnnQuery, WholeDatasetRanking) {
    const auto seqs = walks(120, 6);
    const auto engine = Engine::index_dataset(seqs);
    const Truth truth(seqs);
    const auto expected = truth.ranking(seqs[3]);
    const auto r = engine.knn_query(seqs[3], 120);
    ASSERT_EQ(r.answers.size(), 120u);
    for (std::size_t i = 0; i < 120; ++i) EXPECT_EQ(r.answers[i].id, expected[i].second);

    const auto over = engine.knn_query(seqs[3], 500);
    EXPECT_TRUE(over.k_exceeds_dataset);
    EXPECT_EQ(over.answers.size(), 120u);
    EXPECT_THROW(engine.knn_query(seqs[3], 0), std::invalid_argument);
}

TEST(AllPairs, MatchesNestedLoop) {
    const auto seqs = walks(200, 8);
    const auto engine = Engine::index_dataset(seqs);
    const Truth truth(seqs);
    const double eps = 0.32 * engine.max_amp();
    std::set<std::pair<std::string, std::string>> expected;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        for (std::size_t j = i + 1; j < seqs.size(); ++j) {
            if (oracle::distance(truth.normalized[i], truth.normalized[j]) < eps) {
                expected.insert(std::minmax(seqs[i].id, seqs[j].id));
            }
        }
    }
    EXPECT_FALSE(expected.empty());
    const auto base = engine.all_pairs(eps, RegionPolicy::Baseline);
    const auto sym = engine.all_pairs(eps, RegionPolicy::Symmetric);
    EXPECT_EQ(pairs_of(base), expected);
    EXPECT_EQ(pairs_of(sym), expected);
    EXPECT_EQ(sym.pairs.size(), expected.size());
    EXPECT_LE(sym.candidates, base.candidates);
}

TEST(AllPairs, DuplicateAlwaysFoundAndTinyEpsilonEmpty) {
    auto seqs = walks(100, 9);
    EXPECT_TRUE(Engine::index_dataset(seqs).all_pairs(1e-9, RegionPolicy::Symmetric).pairs.empty());
    seqs.push_back({"copy", seqs[10].values});
    const auto engine = Engine::index_dataset(seqs);
    for (double eps : {1e-12, 1e-3, 1.0}) {
        const auto r = engine.all_pairs(eps, RegionPolicy::Symmetric);
        EXPECT_TRUE(pairs_of(r).contains(std::minmax(std::string("copy"), seqs[10].id))) << eps;
    }
    EXPECT_THROW(engine.all_pairs(0.0, RegionPolicy::Baseline), std::invalid_argument);
}

TEST(MaxAmp, Examples) {
    const auto one = walks(1, 11);
    const auto engine = Engine::index_dataset(one);
    const auto X = oracle::dft(oracle::normalized(one[0].values));
    EXPECT_NEAR(engine.max_amp(), std::abs(X[1]), 1e-9);

    auto scaled = one;
    for (auto& v : scaled[0].values) v *= 10.0;
    EXPECT_NEAR(Engine::index_dataset(scaled).max_amp(), engine.max_amp(), 1e-9);

    EXPECT_THROW(Engine::index_dataset({}).max_amp(), std::invalid_argument);
}

TEST(MaxAmp, MatchesRecomputedSpectra) {
    const auto seqs = walks(1000, 12);
    double expected = 0.0;
    for (const auto& s : seqs) {
        expected = std::max(expected, std::abs(oracle::dft(oracle::normalized(s.values))[1]));
    }
    EXPECT_NEAR(Engine::index_dataset(seqs).max_amp(), expected, 1e-9);
}

TEST(Snapshot, SaveLoadGivesIdenticalReports) {
    const auto seqs = walks(400, 13);
    const auto engine = Engine::index_dataset(seqs, {.k = 3, .max_fanout = 12});
    const auto prefix = std::filesystem::temp_directory_path() / "dftidx_engine_snapshot";
    engine.save(prefix);
    const auto loaded = Engine::load(prefix);
    EXPECT_EQ(loaded.k(), 3u);
    EXPECT_EQ(loaded.size(), 400u);
    const double eps = 0.7 * engine.max_amp();
    for (int q = 0; q < 10; ++q) {
        const auto a = engine.range_query(seqs[q * 7], eps, RegionPolicy::Symmetric);
        const auto b = loaded.range_query(seqs[q * 7], eps, RegionPolicy::Symmetric);
        EXPECT_EQ(a.candidates, b.candidates);
        EXPECT_EQ(a.nodes_touched, b.nodes_touched);
        ASSERT_EQ(a.answers.size(), b.answers.size());
        for (std::size_t i = 0; i < a.answers.size(); ++i) {
            EXPECT_EQ(a.answers[i].id, b.answers[i].id);
            EXPECT_EQ(a.answers[i].distance, b.answers[i].distance);
        }
    }
    std::filesystem::remove(Engine::index_path(prefix));
    EXPECT_THROW(Engine::load(prefix), std::runtime_error);
    std::filesystem::remove(Engine::store_path(prefix));
}

TEST(Report, CsvRow) {
    QueryReport r;
    r.policy = RegionPolicy::Baseline;
    r.epsilon = 0.5;
    r.answers = {{"a", 0.1}, {"b", 0.2}};
    r.candidates = 5;
    r.false_positives = 3;
    r.nodes_touched = 9;
    r.elapsed_micros = 12;
    EXPECT_EQ(report_csv_header(),
              "policy,epsilon,answers,candidates,false_positives,nodes_touched,elapsed_micros");
    EXPECT_EQ(to_csv_row(r), "baseline,0.5,2,5,3,9,12");
}
