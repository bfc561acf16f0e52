#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dftidx/kernels.hpp"

namespace dftidx {

/// Data model: coefficient i (1-based) is uniform over a square of side
/// i^-b, so k coefficients fill the box R = prod_i [0, i^-b]^2. A query
/// rectangle of side s is compared against R.
struct SelectivityParams {
    double b = 1.0;      // amplitude spectrum O(F^-b)
    std::size_t k = 2;   // stored non-zero coefficients
    double side = 1.0;   // query rectangle side s
};

void validate(const SelectivityParams& p);

/// Side of coefficient i's square in R.
double coefficient_extent(double b, std::size_t i);

/// Fraction of R covered by a side-s rectangle centred in R:
/// prod_{i=1..k} (min(i^-b, s) * i^b)^2. A side-s rectangle at R's origin
/// corner covers selectivity({b, k, s/2}).
double selectivity(const SelectivityParams& p);

struct ReductionRatios {
    double worst;  // S(b,k,sqrt2 eps) / S(b,k,2 eps)
    double best;   // S(b,k,eps/sqrt2) / S(b,k,eps)
};

/// Selectivity of the symmetric rectangle relative to the baseline one, for
/// the centred (worst) and corner (best) query. epsilon in (0, 1].
ReductionRatios reduction(double b, std::size_t k, double epsilon);

enum class QueryPosition { Worst, Best };

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Uniform points in R counted against a side-s rectangle at R's centre
/// (Worst) or with its centre on the origin corner (Best). The budget is cut
/// into fixed seeded chunks, so the result does not depend on thread count.
MonteCarloEstimate monte_carlo_selectivity(const SelectivityParams& p, QueryPosition position,
                                           std::uint64_t samples, std::uint64_t seed,
                                           Execution exec = Execution::Parallel);

struct SelectivityRow {
    double epsilon;
    double worst_baseline;   // S(2 eps)
    double worst_symmetric;  // S(sqrt2 eps)
    double best_baseline;    // S(eps)
    double best_symmetric;   // S(eps / sqrt2)

    double worst_reduction() const noexcept { return 1.0 - worst_symmetric / worst_baseline; }
    double best_reduction() const noexcept { return 1.0 - best_symmetric / best_baseline; }
};

std::vector<SelectivityRow> selectivity_curve(double b, std::size_t k,
                                              std::span<const double> eps_grid);

/// Parses "start:stop:step" (inclusive of stop, within rounding) or a comma
/// list "0.1,0.2".
std::vector<double> parse_grid(const std::string& text);

/// Header plus one row per epsilon, reductions as percentages.
void write_selectivity_csv(std::ostream& out, double b, std::size_t k,
                           std::span<const SelectivityRow> rows);

}  // namespace dftidx
