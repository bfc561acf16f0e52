#include "dftidx/selectivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "dftidx/datagen.hpp"

namespace dftidx {

void validate(const SelectivityParams& p) {
    if (!(p.b >= 0.5) || !std::isfinite(p.b)) {
        throw std::invalid_argument("spectral exponent b must be >= 0.5");
    }
    if (p.k < 1) throw std::invalid_argument("k must be at least 1");
    if (!(p.side > 0.0) || !std::isfinite(p.side)) {
        throw std::invalid_argument("rectangle side must be positive");
    }
}

double coefficient_extent(double b, std::size_t i) {
    return std::pow(static_cast<double>(i), -b);
}

double selectivity(const SelectivityParams& p) {
    validate(p);
    double s = 1.0;
    for (std::size_t i = 1; i <= p.k; ++i) {
        const double extent = coefficient_extent(p.b, i);
        const double covered = std::min(extent, p.side) / extent;
        s *= covered * covered;
    }
    return s;
}

ReductionRatios reduction(double b, std::size_t k, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    }
    const double sqrt2 = std::numbers::sqrt2;
    const double worst_base = selectivity({b, k, 2.0 * epsilon});
    const double worst_sym = selectivity({b, k, sqrt2 * epsilon});
    const double best_base = selectivity({b, k, epsilon});
    const double best_sym = selectivity({b, k, epsilon / sqrt2});
    return {worst_sym / worst_base, best_sym / best_base};
}

namespace {

constexpr std::uint64_t kChunks = 64;

std::uint64_t count_hits(const SelectivityParams& p, QueryPosition position,
                         std::uint64_t samples, std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), 0x5e1ecu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t dims = 2 * p.k;
    std::vector<double> extent(dims);
    std::vector<double> lo(dims);
    std::vector<double> hi(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        extent[d] = coefficient_extent(p.b, d / 2 + 1);
        const double center = position == QueryPosition::Worst ? 0.5 * extent[d] : 0.0;
        lo[d] = center - 0.5 * p.side;
        hi[d] = center + 0.5 * p.side;
    }
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        bool inside = true;
        // Draw every coordinate so that the stream layout is fixed per sample.
        for (std::size_t d = 0; d < dims; ++d) {
            const double x = unit(rng) * extent[d];
            inside = inside && x >= lo[d] && x <= hi[d];
        }
        hits += inside ? 1 : 0;
    }
    return hits;
}

}  // namespace

MonteCarloEstimate monte_carlo_selectivity(const SelectivityParams& p, QueryPosition position,
                                           std::uint64_t samples, std::uint64_t seed,
                                           Execution exec) {
    validate(p);
    if (samples < 10'000) throw std::invalid_argument("need at least 10^4 samples");
    std::vector<std::uint64_t> hits(kChunks, 0);
    const auto chunks = static_cast<std::ptrdiff_t>(kChunks);
    auto chunk_samples = [&](std::uint64_t c) {
        return samples / kChunks + (c < samples % kChunks ? 1 : 0);
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < chunks; ++c) {
            const auto cu = static_cast<std::uint64_t>(c);
            hits[cu] = count_hits(p, position, chunk_samples(cu), seed, cu);
        }
    } else {
        for (std::ptrdiff_t c = 0; c < chunks; ++c) {
            const auto cu = static_cast<std::uint64_t>(c);
            hits[cu] = count_hits(p, position, chunk_samples(cu), seed, cu);
        }
    }
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    MonteCarloEstimate est;
    est.samples = samples;
    est.estimate = static_cast<double>(total) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(samples));
    return est;
}

std::vector<SelectivityRow> selectivity_curve(double b, std::size_t k,
                                              std::span<const double> eps_grid) {
    std::vector<SelectivityRow> rows;
    rows.reserve(eps_grid.size());
    const double sqrt2 = std::numbers::sqrt2;
    for (double eps : eps_grid) {
        if (!(eps > 0.0) || eps > 1.0) {
            throw std::invalid_argument("grid value " + format_double(eps) +
                                        " outside (0, 1]");
        }
        rows.push_back({eps, selectivity({b, k, 2.0 * eps}), selectivity({b, k, sqrt2 * eps}),
                        selectivity({b, k, eps}), selectivity({b, k, eps / sqrt2})});
    }
    return rows;
}

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) {
            throw std::invalid_argument("bad number '" + s + "' in grid '" + text + "'");
        }
        return v;
    };
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument("grid needs start:stop:step");
        const double start = number(text.substr(0, c1));
        const double stop = number(text.substr(c1 + 1, c2 - c1 - 1));
        const double step = number(text.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad grid '" + text + "'");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        // Rounded so that 0.05:0.5:0.05 yields 0.15 rather than 0.15000000000000002.
        for (std::size_t i = 0; i < count; ++i) {
            grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto end = comma == std::string::npos ? text.size() : comma;
            grid.push_back(number(text.substr(start, end - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return grid;
}

void write_selectivity_csv(std::ostream& out, double b, std::size_t k,
                           std::span<const SelectivityRow> rows) {
    out << "b,k,epsilon,worst_2eps,worst_sqrt2eps,best_eps,best_eps_over_sqrt2,"
           "worst_reduction_pct,best_reduction_pct\n";
    for (const auto& r : rows) {
        out << format_double(b) << ',' << k << ',' << format_double(r.epsilon) << ','
            << format_double(r.worst_baseline) << ',' << format_double(r.worst_symmetric) << ','
            << format_double(r.best_baseline) << ',' << format_double(r.best_symmetric) << ','
            << format_double(100.0 * r.worst_reduction()) << ','
            << format_double(100.0 * r.best_reduction()) << '\n';
    }
}

}  // namespace dftidx
