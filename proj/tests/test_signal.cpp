#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dftidx/signal.hpp"
#include "oracles.hpp"

using namespace dftidx;

namespace {

void expect_complex_near(const Complex& a, const Complex& b, double tol) {
    EXPECT_NEAR(a.real(), b.real(), tol);
    EXPECT_NEAR(a.imag(), b.imag(), tol);
}

TimeSequence seq(std::vector<double> v, std::string id = "s") { return {std::move(id), std::move(v)}; }

}  // namespace

TEST(Dft, ConstantSequence) {
    const auto X = dft(seq({1, 1, 1, 1}));
    ASSERT_EQ(X.size(), 4u);
    expect_complex_near(X[0], {2, 0}, 1e-12);
    for (int f = 1; f < 4; ++f) expect_complex_near(X[f], {0, 0}, 1e-12);
}

TEST(Dft, UnitImpulseIsFlat) {
    const auto X = dft(seq({1, 0, 0, 0}));
    for (const auto& c : X) expect_complex_near(c, {0.5, 0}, 1e-12);
}

TEST(Dft, AlternatingSine) {
    // Frozen from oracle::dft: [0, -j, 0, +j].
    const std::vector<double> x{0, 1, 0, -1};
    const auto ref = oracle::dft(x);
    expect_complex_near(ref[1], {0, -1}, 1e-15);
    expect_complex_near(ref[3], {0, 1}, 1e-15);

    const auto X = dft(seq(x));
    expect_complex_near(X[0], {0, 0}, 1e-12);
    expect_complex_near(X[1], {0, -1}, 1e-12);
    expect_complex_near(X[2], {0, 0}, 1e-12);
    expect_complex_near(X[3], {0, 1}, 1e-12);
    expect_complex_near(X[3], std::conj(X[1]), 1e-12);
}

TEST(Dft, RejectsNonFiniteWithIndex) {
    try {
        dft(seq({1.0, 2.0, std::nan(""), 4.0}));
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(dft(seq({1.0, INFINITY})), std::invalid_argument);
    EXPECT_THROW(dft(seq({1.0})), std::invalid_argument);
}

TEST(Dft, FastAndDirectMatchOracle) {
    std::mt19937_64 rng(7);
    for (std::size_t n : {2u, 3u, 16u, 64u, 100u, 128u, 257u, 512u}) {
        const auto x = oracle::uniform_vector(rng, n);
        const auto ref = oracle::dft(x);
        const auto direct = dft_direct(x);
        const auto dispatched = dft(x);
        for (std::size_t f = 0; f < n; ++f) {
            expect_complex_near(direct[f], ref[f], 1e-9);
            expect_complex_near(dispatched[f], ref[f], 1e-9);
        }
        if (is_power_of_two(n)) {
            const auto fast = fft_radix2(x);
            for (std::size_t f = 0; f < n; ++f) expect_complex_near(fast[f], direct[f], 1e-9);
        }
    }
    EXPECT_THROW(fft_radix2(std::vector<double>(12, 1.0)), std::invalid_argument);
}

TEST(Dft, PartialCoefficientsMatchFullTransform) {
    std::mt19937_64 rng(11);
    const auto x = oracle::uniform_vector(rng, 96);
    const auto full = dft(x);
    const auto part = dft_coefficients(x, 1, 5);
    for (std::size_t c = 0; c < 5; ++c) expect_complex_near(part[c], full[c + 1], 1e-12);
    EXPECT_THROW(dft_coefficients(x, 95, 2), std::invalid_argument);
}

TEST(Dft, InverseRoundTrip) {
    std::mt19937_64 rng(3);
    for (std::size_t n : {5u, 64u, 129u}) {
        const auto x = oracle::uniform_vector(rng, n, -100, 100);
        const auto back = inverse_dft_real(dft(x));
        for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(back[t], x[t], 1e-9);
    }
}

TEST(DftProperty, ParsevalSymmetryLinearity) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(16, 512);
    std::uniform_real_distribution<double> coef(-3, 3);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = len(rng);
        const auto x = oracle::uniform_vector(rng, n, -50, 50);
        const auto y = oracle::uniform_vector(rng, n, -50, 50);
        const auto X = dft(x);
        const auto Y = dft(y);

        const double ex = energy(std::span<const double>(x));
        EXPECT_LE(std::abs(ex - energy(std::span<const Complex>(X))), 1e-9 * ex) << "n=" << n;

        for (std::size_t f = 1; f < n; ++f) {
            EXPECT_LE(std::abs(X[n - f] - std::conj(X[f])), 1e-9);
            EXPECT_NEAR(std::abs(X[n - f]), std::abs(X[f]), 1e-9);
        }

        const double a = coef(rng);
        const double b = coef(rng);
        std::vector<double> combo(n);
        for (std::size_t t = 0; t < n; ++t) combo[t] = a * x[t] + b * y[t];
        const auto C = dft(combo);
        for (std::size_t f = 0; f < n; ++f) {
            EXPECT_LE(std::abs(C[f] - (a * X[f] + b * Y[f])), 1e-9);
        }
    }
}

TEST(Energy, Examples) {
    EXPECT_DOUBLE_EQ(energy(std::vector<double>{0, 1, 0, -1}), 2.0);
    const std::vector<Complex> c{{2, 0}, {0, 0}, {0, 0}, {0, 0}};
    EXPECT_DOUBLE_EQ(energy(std::span<const Complex>(c)), 4.0);

    std::mt19937_64 rng(5);
    const auto x = oracle::uniform_vector(rng, 128, -10, 10);
    const double ex = energy(std::span<const double>(x));
    EXPECT_LE(std::abs(energy(std::span<const Complex>(dft(x))) - ex), 1e-9 * ex);
}

TEST(Normalize, HandComputed) {
    const auto [out, params] = normalize(seq({1, 2, 3, 4}));
    EXPECT_NEAR(params.mean, 2.5, 1e-12);
    EXPECT_NEAR(params.std, 1.118034, 1e-6);
    const double expected[] = {-1.341641, -0.447214, 0.447214, 1.341641};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(out.values[i], expected[i], 1e-6);
}

TEST(Normalize, RejectsConstant) {
    EXPECT_THROW(normalize(seq({5, 5, 5, 5})), std::invalid_argument);
}

TEST(Normalize, IdempotentAndUnitMoments) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto [once, p1] = normalize(seq(oracle::random_walk(rng, 200)));
        double mean = 0, var = 0;
        for (double v : once.values) mean += v;
        mean /= 200;
        for (double v : once.values) var += (v - mean) * (v - mean);
        EXPECT_NEAR(mean, 0.0, 1e-9);
        EXPECT_NEAR(std::sqrt(var / 200), 1.0, 1e-9);

        const auto [twice, p2] = normalize(once);
        EXPECT_NEAR(p2.mean, 0.0, 1e-9);
        EXPECT_NEAR(p2.std, 1.0, 1e-9);
        for (std::size_t i = 0; i < 200; ++i) EXPECT_NEAR(twice.values[i], once.values[i], 1e-9);
    }
}

TEST(ExtractFeatures, FourPointSine) {
    // Normalizing [0,1,0,-1] scales it by sqrt(2), so X_1 = -sqrt(2) j.
    const auto norm = oracle::normalized(std::vector<double>{0, 1, 0, -1});
    const auto ref = oracle::dft(norm);
    const auto f = extract_features(seq({0, 1, 0, -1}), 1);
    ASSERT_EQ(f.coords.size(), 2u);
    EXPECT_NEAR(f.coords[0], ref[1].real(), 1e-12);
    EXPECT_NEAR(f.coords[1], ref[1].imag(), 1e-12);
    EXPECT_NEAR(f.coords[1], -std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(f.norm.mean, 0.0, 1e-15);
    EXPECT_NEAR(f.norm.std, std::sqrt(0.5), 1e-15);
}

TEST(ExtractFeatures, TruncationNeverExceedsEnergy) {
    std::mt19937_64 rng(13);
    for (std::size_t k : {1u, 2u, 4u, 8u}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = extract_features(seq(oracle::uniform_vector(rng, 64)), k);
            ASSERT_EQ(f.coords.size(), 2 * k);
            double sq = 0;
            for (double c : f.coords) sq += c * c;
            EXPECT_LE(sq, 64.0 + 1e-9);
            // Each stored coefficient also has a mirror, so 2 * sq <= n.
            EXPECT_LE(2.0 * sq, 64.0 + 1e-9);
        }
    }
}

TEST(ExtractFeatures, AffineInvariance) {
    std::mt19937_64 rng(17);
    const auto x = oracle::random_walk(rng, 128);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.5 * x[i] - 1200.0;
    const auto fx = extract_features(seq(x), 3);
    const auto fy = extract_features(seq(y), 3);
    for (std::size_t d = 0; d < fx.coords.size(); ++d) EXPECT_NEAR(fx.coords[d], fy.coords[d], 1e-9);
    EXPECT_NE(fx.norm.mean, fy.norm.mean);
    EXPECT_NEAR(fy.norm.std, 3.5 * fx.norm.std, 1e-6);
}

TEST(ExtractFeatures, Preconditions) {
    EXPECT_THROW(extract_features(seq({1, 2, 3, 4}), 0), std::invalid_argument);
    // 2k + 1 <= n: k = 2 needs n >= 5.
    EXPECT_THROW(extract_features(seq({1, 2, 3, 4}), 2), std::invalid_argument);
    EXPECT_NO_THROW(extract_features(seq({1, 2, 3, 4, 5}), 2));
    EXPECT_THROW(extract_features(seq({2, 2, 2, 2, 2}), 1), std::invalid_argument);
}
