#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dftidx {

using Complex = std::complex<double>;

/// Full DFT of a sequence, X_0 .. X_{n-1}, with the unitary 1/sqrt(n) scaling.
using Spectrum = std::vector<Complex>;

/// A raw real-valued time sequence with an identifier.
struct TimeSequence {
    std::string id;
    std::vector<double> values;

    std::size_t length() const noexcept { return values.size(); }
};

/// Throws std::invalid_argument if the sequence is shorter than 2 samples or
/// holds a non-finite sample (the message names the offending index).
void validate(const TimeSequence& seq);

struct NormalizationParams {
    double mean = 0.0;
    double std = 1.0;  // population standard deviation
};

/// The indexed point for one sequence: real/imaginary parts of X_1..X_k of
/// the normalized sequence, laid out as (re_1, im_1, re_2, im_2, ...).
struct SpectrumFeature {
    std::string id;
    std::size_t k = 0;
    std::vector<double> coords;
    NormalizationParams norm;

    std::size_t dimension() const noexcept { return coords.size(); }
};

/// Direct O(n^2) evaluation of X_f = (1/sqrt(n)) sum_t x_t exp(-j 2 pi t f / n).
Spectrum dft_direct(std::span<const double> values);

/// Iterative radix-2 transform; `values.size()` must be a power of two.
Spectrum fft_radix2(std::span<const double> values);

/// Dispatches to fft_radix2 for power-of-two lengths, dft_direct otherwise.
Spectrum dft(std::span<const double> values);
Spectrum dft(const TimeSequence& seq);

/// Coefficients X_first .. X_{first+count-1} only, O(n * count).
std::vector<Complex> dft_coefficients(std::span<const double> values, std::size_t first,
                                      std::size_t count);

/// Inverse of dft() (same 1/sqrt(n) scaling), keeping the complex result.
std::vector<Complex> inverse_dft(std::span<const Complex> spectrum);

/// Inverse transform of a spectrum known to come from a real signal; returns
/// the real parts.
std::vector<double> inverse_dft_real(std::span<const Complex> spectrum);

double energy(std::span<const double> values);
double energy(std::span<const Complex> values);

bool is_power_of_two(std::size_t n) noexcept;

/// Mean 0, population std 1. Throws std::invalid_argument for a constant
/// sequence.
std::pair<TimeSequence, NormalizationParams> normalize(const TimeSequence& seq);

/// Smallest n for which `k` coefficients can be stored: X_1..X_k must stay
/// strictly below n/2.
constexpr std::size_t min_length_for(std::size_t k) noexcept { return 2 * k + 1; }

/// Normalizes `seq`, then keeps X_1..X_k. Requires k >= 1 and 2k + 1 <= n.
SpectrumFeature extract_features(const TimeSequence& seq, std::size_t k);

/// Same as extract_features for a sequence already in normal form.
SpectrumFeature features_of_normalized(const TimeSequence& normalized, std::size_t k,
                                       NormalizationParams norm);

}  // namespace dftidx
