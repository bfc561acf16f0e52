#include "dftidx/signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dftidx {

namespace {

// e^{-j 2 pi m / n} for m = 0..n-1, each entry evaluated from its own angle.
std::vector<Complex> twiddles(std::size_t n) {
    std::vector<Complex> w(n);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double angle = step * static_cast<double>(m);
        w[m] = Complex(std::cos(angle), std::sin(angle));
    }
    return w;
}

// Unscaled O(n^2) transform; `sign` = -1 forward, +1 inverse.
std::vector<Complex> direct_transform(std::span<const Complex> in, int sign) {
    const std::size_t n = in.size();
    const auto w = twiddles(n);
    std::vector<Complex> out(n);
    for (std::size_t f = 0; f < n; ++f) {
        Complex acc{0.0, 0.0};
        std::size_t m = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const Complex tw = sign < 0 ? w[m] : std::conj(w[m]);
            acc += in[t] * tw;
            m += f;
            if (m >= n) m -= n;
        }
        out[f] = acc;
    }
    return out;
}

// In-place unscaled radix-2 transform.
void radix2_transform(std::vector<Complex>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t i = 0; i < half; ++i) {
                const Complex tw = sign < 0 ? w[i * stride] : std::conj(w[i * stride]);
                const Complex u = a[start + i];
                const Complex v = a[start + i + half] * tw;
                a[start + i] = u + v;
                a[start + i + half] = u - v;
            }
        }
    }
}

std::vector<Complex> transform(std::vector<Complex> data, int sign) {
    if (data.empty()) return data;
    if (is_power_of_two(data.size())) {
        radix2_transform(data, sign);
    } else {
        data = direct_transform(data, sign);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
    for (auto& c : data) c *= scale;
    return data;
}

std::vector<Complex> to_complex(std::span<const double> values) {
    return {values.begin(), values.end()};
}

void require_finite(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("non-finite sample at index " + std::to_string(i));
        }
    }
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void validate(const TimeSequence& seq) {
    if (seq.length() < 2) {
        throw std::invalid_argument("sequence '" + seq.id + "' has fewer than 2 samples");
    }
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
        if (!std::isfinite(seq.values[i])) {
            throw std::invalid_argument("sequence '" + seq.id + "': non-finite sample at index " +
                                        std::to_string(i));
        }
    }
}

Spectrum dft_direct(std::span<const double> values) {
    require_finite(values);
    auto out = direct_transform(to_complex(values), -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(values.size()));
    for (auto& c : out) c *= scale;
    return out;
}

Spectrum fft_radix2(std::span<const double> values) {
    if (!is_power_of_two(values.size())) {
        throw std::invalid_argument("fft_radix2 needs a power-of-two length, got " +
                                    std::to_string(values.size()));
    }
    require_finite(values);
    return transform(to_complex(values), -1);
}

Spectrum dft(std::span<const double> values) {
    require_finite(values);
    return transform(to_complex(values), -1);
}

Spectrum dft(const TimeSequence& seq) {
    validate(seq);
    return transform(to_complex(seq.values), -1);
}

std::vector<Complex> dft_coefficients(std::span<const double> values, std::size_t first,
                                      std::size_t count) {
    const std::size_t n = values.size();
    if (first + count > n) {
        throw std::invalid_argument("requested coefficients beyond sequence length");
    }
    const auto w = twiddles(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Complex> out(count);
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t f = first + c;
        double re = 0.0;
        double im = 0.0;
        std::size_t m = 0;
        for (std::size_t t = 0; t < n; ++t) {
            re += values[t] * w[m].real();
            im += values[t] * w[m].imag();
            m += f;
            if (m >= n) m -= n;
        }
        out[c] = Complex(re * scale, im * scale);
    }
    return out;
}

std::vector<Complex> inverse_dft(std::span<const Complex> spectrum) {
    return transform({spectrum.begin(), spectrum.end()}, +1);
}

std::vector<double> inverse_dft_real(std::span<const Complex> spectrum) {
    const auto full = inverse_dft(spectrum);
    std::vector<double> out(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
    return out;
}

double energy(std::span<const double> values) {
    double e = 0.0;
    for (double v : values) e += v * v;
    return e;
}

double energy(std::span<const Complex> values) {
    double e = 0.0;
    for (const auto& v : values) e += std::norm(v);
    return e;
}

std::pair<TimeSequence, NormalizationParams> normalize(const TimeSequence& seq) {
    validate(seq);
    const auto n = static_cast<double>(seq.length());
    double mean = 0.0;
    for (double v : seq.values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : seq.values) var += (v - mean) * (v - mean);
    var /= n;
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
        throw std::invalid_argument("sequence '" + seq.id + "' has zero standard deviation");
    }
    TimeSequence out{seq.id, std::vector<double>(seq.length())};
    for (std::size_t i = 0; i < seq.length(); ++i) out.values[i] = (seq.values[i] - mean) / sd;
    return {std::move(out), NormalizationParams{mean, sd}};
}

SpectrumFeature features_of_normalized(const TimeSequence& normalized, std::size_t k,
                                       NormalizationParams norm) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (min_length_for(k) > normalized.length()) {
        throw std::invalid_argument("k = " + std::to_string(k) + " too large for length " +
                                    std::to_string(normalized.length()) + " (need 2k+1 <= n)");
    }
    const auto coeffs = dft_coefficients(normalized.values, 1, k);
    SpectrumFeature feature{normalized.id, k, {}, norm};
    feature.coords.reserve(2 * k);
    for (const auto& c : coeffs) {
        feature.coords.push_back(c.real());
        feature.coords.push_back(c.imag());
    }
    return feature;
}

SpectrumFeature extract_features(const TimeSequence& seq, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (min_length_for(k) > seq.length()) {
        throw std::invalid_argument("k = " + std::to_string(k) + " too large for length " +
                                    std::to_string(seq.length()) + " (need 2k+1 <= n)");
    }
    auto [normalized, params] = normalize(seq);
    return features_of_normalized(normalized, k, params);
}

}  // namespace dftidx
