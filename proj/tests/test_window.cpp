#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "tsad/detect/window.hpp"
#include "tsad/error.hpp"

using namespace tsad;
using namespace tsad::detect;
using testing_support::sine;

namespace {

std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

std::size_t default_upper(std::size_t n) { return std::min<std::size_t>(1000, n / 4); }

}  // namespace

TEST(WindowFft, PureSine) {
    const auto x = sine(1000, 25.0);
    const auto est = estimate_window_fft(x);
    EXPECT_EQ(est.window, 25u);
    EXPECT_FALSE(est.fallback);
    EXPECT_EQ(est.window, oracle::dft_period(x, 10, default_upper(1000)));
}

TEST(WindowFft, DominantOfTwoSines) {
    const auto x = add(sine(980, 20.0, 3.0), sine(980, 7.0, 1.0));
    EXPECT_EQ(estimate_window_fft(x).window, 20u);
    EXPECT_EQ(oracle::dft_period(x, 10, default_upper(980)), 20u);
}

TEST(WindowFft, MatchesNaiveDftOnRandomMixtures) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 200 + rng() % 700;
        std::vector<double> x(n, 0.0);
        for (int c = 0; c < 3; ++c) {
            const double period = 5.0 + u(rng) * 120.0;
            x = add(x, sine(n, period, 0.2 + 2.0 * u(rng), 6.28 * u(rng)));
        }
        const auto noise = testing_support::gaussian_series(n, rng());
        for (std::size_t t = 0; t < n; ++t) x[t] += 0.3 * noise[t];
        const std::size_t lower = 5 + rng() % 10;
        const std::size_t upper = std::max(lower, std::min<std::size_t>(n / 3, lower + 30 + rng() % 200));
        const auto est = estimate_window_fft(x, lower, upper);
        const auto want = oracle::dft_period(x, lower, upper);
        ASSERT_NE(want, 0u);
        EXPECT_EQ(est.window, want) << "n=" << n << " band=[" << lower << "," << upper << "]";
        EXPECT_FALSE(est.fallback);
    }
}

TEST(WindowFft, RecoversPeriodUnderJitter) {
    for (std::size_t p : {10u, 25u, 50u}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const std::size_t n = 40 * p;
            auto x = sine(n, static_cast<double>(p), 1.0, 0.1 * static_cast<double>(seed));
            const auto noise = testing_support::gaussian_series(n, seed);
            for (std::size_t t = 0; t < n; ++t) x[t] += 0.05 * noise[t];
            const auto w = estimate_window_fft(x).window;
            EXPECT_LE(w, p + 1);
            EXPECT_GE(w + 1, p);
        }
    }
}

TEST(WindowFft, ConstantSeriesFallsBack) {
    const std::vector<double> flat(500, 3.25);
    const auto est = estimate_window_fft(flat);
    EXPECT_TRUE(est.fallback);
    EXPECT_EQ(est.window, 50u);  // clamp(500/10, 10, 125)
    const auto small = estimate_window_fft(std::vector<double>(40, 1.0));
    EXPECT_TRUE(small.fallback);
    EXPECT_EQ(small.window, 10u);  // clamp(4, 10, 10)
}

TEST(WindowFft, EmptyBandFallsBack) {
    // a band with no bin k=1..n/2 whose rounded period lands inside it
    const auto x = sine(100, 10.0);
    const auto est = estimate_window_fft(x, 34, 49);
    EXPECT_TRUE(est.fallback);
    EXPECT_EQ(est.window, 34u);  // clamp(10, 34, 49)
    EXPECT_EQ(oracle::dft_period(x, 34, 49), 0u);
}

TEST(WindowFft, ParameterErrors) {
    EXPECT_THROW(estimate_window_fft(std::vector<double>(19, 1.0)), ParameterError);
    EXPECT_THROW(estimate_window_fft(sine(100, 10.0), 20, 15), ParameterError);
    EXPECT_THROW(estimate_window_fft(sine(100, 10.0), 0, 15), ParameterError);
}

TEST(WindowSize, Descriptors) {
    EXPECT_TRUE(WindowSize::fft().is_fft());
    EXPECT_EQ(WindowSize::fft().to_string(), "fft");
    EXPECT_EQ(WindowSize::fixed(16).value(), 16u);
    EXPECT_EQ(WindowSize::fixed(16).to_string(), "16");
}
