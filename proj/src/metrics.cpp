#include "dftidx/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dftidx {

std::string_view to_string(RegionPolicy policy) noexcept {
    return policy == RegionPolicy::Baseline ? "baseline" : "symmetric";
}

RegionPolicy parse_policy(std::string_view name) {
    if (name == "baseline") return RegionPolicy::Baseline;
    if (name == "symmetric") return RegionPolicy::Symmetric;
    throw std::invalid_argument("unknown region policy '" + std::string(name) + "'");
}

double half_width(double epsilon, RegionPolicy policy) noexcept {
    return policy == RegionPolicy::Baseline ? epsilon : epsilon / std::numbers::sqrt2;
}

double coefficient_weight(RegionPolicy policy) noexcept {
    return policy == RegionPolicy::Baseline ? 1.0 : 2.0;
}

double QueryRegion::volume() const noexcept {
    double v = 1.0;
    for (double h : half_widths) v *= 2.0 * h;
    return v;
}

bool QueryRegion::contains_strict(std::span<const double> point) const {
    if (point.size() != center.size()) {
        throw std::invalid_argument("point dimension does not match region dimension");
    }
    for (std::size_t d = 0; d < point.size(); ++d) {
        if (!(std::abs(point[d] - center[d]) < half_widths[d])) return false;
    }
    return true;
}

QueryRegion make_region(std::span<const double> center, double epsilon, RegionPolicy policy,
                        RegionOptions options) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be positive and finite");
    }
    QueryRegion region;
    region.policy = policy;
    region.center.assign(center.begin(), center.end());
    region.half_widths.assign(center.size(), half_width(epsilon, policy));
    if (options.include_dc) {
        if (center.empty()) throw std::invalid_argument("include_dc needs an X_0 coordinate");
        region.half_widths.front() = epsilon;
    }
    return region;
}

QueryRegion make_region(const SpectrumFeature& query, double epsilon, RegionPolicy policy) {
    return make_region(query.coords, epsilon, policy);
}

double true_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("length mismatch: " + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double true_distance(const TimeSequence& x, const TimeSequence& y) {
    return true_distance(std::span<const double>(x.values), std::span<const double>(y.values));
}

double spectrum_distance(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spectrum length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += std::norm(x[i] - y[i]);
    return std::sqrt(sum);
}

double weighted_coord_distance(std::span<const double> a, std::span<const double> b,
                               double weight) {
    if (a.size() != b.size()) throw std::invalid_argument("coordinate dimension mismatch");
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return std::sqrt(weight * sum);
}

namespace {
void require_same_k(const SpectrumFeature& a, const SpectrumFeature& b) {
    if (a.k != b.k || a.coords.size() != b.coords.size()) {
        throw std::invalid_argument("feature k mismatch: " + std::to_string(a.k) + " vs " +
                                    std::to_string(b.k));
    }
}
}  // namespace

double lower_bound_distance(const SpectrumFeature& a, const SpectrumFeature& b) {
    require_same_k(a, b);
    return weighted_coord_distance(a.coords, b.coords, 2.0);
}

double baseline_bound_distance(const SpectrumFeature& a, const SpectrumFeature& b) {
    require_same_k(a, b);
    return weighted_coord_distance(a.coords, b.coords, 1.0);
}

}  // namespace dftidx
