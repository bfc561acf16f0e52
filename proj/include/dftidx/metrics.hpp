#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dftidx/signal.hpp"

namespace dftidx {

/// How the search rectangle around a query feature is sized.
///
/// Baseline keeps |X_f - Q_f| < eps per coefficient (side 2 eps). Symmetric
/// uses the mirrored coefficient X_{n-f} = conj(X_f): every stored
/// coefficient counts twice in the full distance, so |X_f - Q_f| < eps/sqrt(2)
/// is already necessary (side sqrt(2) eps).
enum class RegionPolicy { Baseline, Symmetric };

std::string_view to_string(RegionPolicy policy) noexcept;
RegionPolicy parse_policy(std::string_view name);

/// Half-width applied to each stored-coefficient dimension.
double half_width(double epsilon, RegionPolicy policy) noexcept;

/// Weight w of a stored coefficient in the bound sqrt(w * sum |X_f - Q_f|^2).
double coefficient_weight(RegionPolicy policy) noexcept;

/// Axis-aligned search rectangle: center +- half_widths, per dimension.
struct QueryRegion {
    std::vector<double> center;
    std::vector<double> half_widths;
    RegionPolicy policy = RegionPolicy::Symmetric;

    std::size_t dimension() const noexcept { return center.size(); }
    double volume() const noexcept;
    /// Strict per-dimension test |p_d - c_d| < h_d.
    bool contains_strict(std::span<const double> point) const;
};

struct RegionOptions {
    /// Prepend a real X_0 dimension (unnormalized data). That side always
    /// keeps half-width eps since X_0 has no mirror partner.
    bool include_dc = false;
};

QueryRegion make_region(std::span<const double> center, double epsilon, RegionPolicy policy,
                        RegionOptions options = {});
QueryRegion make_region(const SpectrumFeature& query, double epsilon, RegionPolicy policy);

/// Euclidean distance of two equal-length sequences.
double true_distance(std::span<const double> x, std::span<const double> y);
double true_distance(const TimeSequence& x, const TimeSequence& y);

/// Euclidean distance between two complex vectors (frequency domain).
double spectrum_distance(std::span<const Complex> x, std::span<const Complex> y);

/// sqrt(weight * sum_d (a_d - b_d)^2) over flat coordinate arrays.
double weighted_coord_distance(std::span<const double> a, std::span<const double> b,
                               double weight);

/// sqrt(sum_f 2 |X_f - Q_f|^2): lower bound on the normalized true distance.
double lower_bound_distance(const SpectrumFeature& a, const SpectrumFeature& b);

/// sqrt(sum_f |X_f - Q_f|^2): the unweighted truncated distance.
double baseline_bound_distance(const SpectrumFeature& a, const SpectrumFeature& b);

}  // namespace dftidx
