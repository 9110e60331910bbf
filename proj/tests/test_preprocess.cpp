#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "tsad/error.hpp"
#include "tsad/preprocess/preprocessor.hpp"

using namespace tsad;
using namespace tsad::preprocess;

namespace {

std::vector<double> values(const TimeSeries& x) { return {x.begin(), x.end()}; }

TimeSeries series(std::vector<double> v) { return TimeSeries(std::move(v)); }

void expect_near(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "at " << i;
}

// Edge-clipped centred mean written out per point.
std::vector<double> naive_moving_average(const std::vector<double>& x, std::size_t w) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const auto left = static_cast<std::ptrdiff_t>(w / 2);
    const auto right = static_cast<std::ptrdiff_t>(w) - 1 - left;
    std::vector<double> out;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0;
        int c = 0;
        for (std::ptrdiff_t j = i - left; j <= i + right; ++j) {
            if (j >= 0 && j < n) {
                s += x[static_cast<std::size_t>(j)];
                ++c;
            }
        }
        out.push_back(s / c);
    }
    return out;
}

}  // namespace

TEST(ZNormalize, FitStoresPopulationMoments) {
    const auto p = Preprocessor::z_normalize().fit(series({1, 2, 3}));
    const auto& z = std::get<ZNormalize>(p.steps().front());
    ASSERT_TRUE(z.state.has_value());
    EXPECT_DOUBLE_EQ(z.state->mean, 2.0);
    EXPECT_NEAR(z.state->sd, std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(ZNormalize, TrainHasZeroMeanUnitSd) {
    const auto x = testing_support::gaussian_series(500, 3);
    std::vector<double> shifted;
    for (double v : x) shifted.push_back(40.0 + 7.0 * v);
    const auto out = values(Preprocessor::z_normalize().fit(series(shifted)).transform(series(shifted)));
    double mean = 0, var = 0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(out.size());
    for (double v : out) var += (v - mean) * (v - mean);
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(var / static_cast<double>(out.size())), 1.0, 1e-9);
}

TEST(ZNormalize, DegenerateGivesZeros) {
    const auto p = Preprocessor::z_normalize().fit(series({4, 4, 4}));
    EXPECT_EQ(values(p.transform(series({1, 5, 9}))), (std::vector<double>{0, 0, 0}));
}

TEST(ZNormalize, ReusesTrainStatistics) {
    const auto p = Preprocessor::z_normalize().fit(series({1, 2, 3}));
    const double sd = std::sqrt(2.0 / 3.0);
    expect_near(values(p.transform(series({2, 5}))), {0.0, 3.0 / sd});
}

TEST(MinMax, FitAndTransform) {
    const auto p = Preprocessor::min_max().fit(series({1, 2, 3}));
    const auto& mm = std::get<MinMax>(p.steps().front());
    EXPECT_EQ(mm.state->min, 1.0);
    EXPECT_EQ(mm.state->max, 3.0);
    EXPECT_EQ(values(p.transform(series({1, 2, 3}))), (std::vector<double>{0, 0.5, 1}));
    EXPECT_EQ(values(p.transform(series({-5, 10}))), (std::vector<double>{0, 1}));
    EXPECT_EQ(values(Preprocessor::min_max().fit(series({2, 2})).transform(series({1, 7}))),
              (std::vector<double>{0.5, 0.5}));
}

TEST(Preprocessor, UnfittedScalersRefuseTransform) {
    EXPECT_THROW(Preprocessor::z_normalize().transform(series({1})), StateError);
    EXPECT_THROW(Preprocessor::min_max().transform(series({1})), StateError);
    EXPECT_NO_THROW(Preprocessor::moving_average(3).transform(series({1, 2})));
    EXPECT_FALSE(Preprocessor::z_normalize().is_fitted());
    EXPECT_TRUE(Preprocessor::z_normalize().fit(series({1, 2})).is_fitted());
}

TEST(Preprocessor, ParameterDomains) {
    EXPECT_THROW(Preprocessor::moving_average(0), ParameterError);
    EXPECT_THROW(Preprocessor::exp_smoothing(0.0), ParameterError);
    EXPECT_THROW(Preprocessor::exp_smoothing(1.5), ParameterError);
    EXPECT_THROW(Preprocessor::exp_smoothing(std::nan("")), ParameterError);
    EXPECT_THROW(Preprocessor::undersample(0), ParameterError);
}

TEST(MovingAverage, HandExample) {
    expect_near(values(Preprocessor::moving_average(3).transform(series({1, 2, 3, 4}))), {1.5, 2, 3, 3.5});
}

TEST(MovingAverage, MatchesNaiveWindowMean) {
    const auto x = testing_support::gaussian_series(57, 11);
    for (std::size_t w : {1u, 2u, 3u, 4u, 9u, 10u, 57u, 80u}) {
        expect_near(values(Preprocessor::moving_average(w).transform(series(x))), naive_moving_average(x, w), 1e-12);
    }
}

TEST(MovingAverage, FitLeavesNoState) {
    const auto p = Preprocessor::moving_average(3);
    const auto fitted = p.fit(series({5, 1, 9}));
    EXPECT_EQ(std::get<MovingAverage>(fitted.steps().front()).window, 3u);
    EXPECT_EQ(values(fitted.transform(series({1, 2, 3, 4}))), values(p.transform(series({1, 2, 3, 4}))));
}

TEST(ExpSmoothing, Recurrence) {
    const std::vector<double> x{3, -1, 4, 1, -5};
    EXPECT_EQ(values(Preprocessor::exp_smoothing(1.0).transform(series(x))), x);
    const auto y = values(Preprocessor::exp_smoothing(0.25).transform(series(x)));
    double prev = x[0];
    EXPECT_EQ(y[0], x[0]);
    for (std::size_t t = 1; t < x.size(); ++t) {
        prev = 0.25 * x[t] + 0.75 * prev;
        EXPECT_NEAR(y[t], prev, 1e-12);
    }
}

TEST(Undersample, IndexFormula) {
    EXPECT_EQ(Preprocessor::undersample(2).kept_indices(4), (std::vector<std::size_t>{0, 3}));
    EXPECT_EQ(Preprocessor::undersample(1).kept_indices(4), (std::vector<std::size_t>{0}));
    EXPECT_EQ(Preprocessor::undersample(3).kept_indices(5), (std::vector<std::size_t>{0, 2, 4}));
    EXPECT_EQ(Preprocessor::undersample(9).kept_indices(4), (std::vector<std::size_t>{0, 1, 2, 3}));
    for (std::size_t n = 1; n < 40; ++n) {
        for (std::size_t k = 2; k < 45; ++k) {
            const auto idx = Preprocessor::undersample(k).kept_indices(n);
            ASSERT_EQ(idx.size(), std::min(k, n));
            if (k >= n) continue;
            for (std::size_t i = 0; i < k; ++i) {
                const auto want = static_cast<std::size_t>(
                    std::floor(static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(k - 1) + 0.5));
                EXPECT_EQ(idx[i], want) << "n=" << n << " k=" << k << " i=" << i;
            }
        }
    }
    EXPECT_EQ(values(Preprocessor::undersample(2).transform(series({7, 8, 9, 10}))), (std::vector<double>{7, 10}));
}

TEST(Chain, Semantics) {
    const std::vector<double> train{1, 2, 3};
    const std::vector<Preprocessor> single{Preprocessor::identity()};
    EXPECT_EQ(values(Preprocessor::chain(single).fit(series(train)).transform(series({4, 5}))),
              (std::vector<double>{4, 5}));

    const std::vector<Preprocessor> twice{Preprocessor::min_max(), Preprocessor::min_max()};
    const auto a = values(Preprocessor::chain(twice).fit(series(train)).transform(series({0, 1.5, 2, 3.5})));
    const auto b = values(Preprocessor::min_max().fit(series(train)).transform(series({0, 1.5, 2, 3.5})));
    EXPECT_EQ(a, b);

    EXPECT_THROW(Preprocessor::chain(std::span<const Preprocessor>{}), ParameterError);
}

TEST(Chain, LaterStagesFitOnTransformedTrain) {
    const std::vector<Preprocessor> stages{Preprocessor::moving_average(3), Preprocessor::z_normalize()};
    const std::vector<double> train{1, 4, 2, 8, 5, 7};
    const auto fitted = Preprocessor::chain(stages).fit(series(train));
    const auto smoothed = naive_moving_average(train, 3);
    const auto out = values(fitted.transform(series(train)));
    const auto manual = values(Preprocessor::z_normalize().fit(series(smoothed)).transform(series(smoothed)));
    expect_near(out, manual);
}

TEST(Chain, StageErrorsCarryTheIndex) {
    const std::vector<Preprocessor> stages{Preprocessor::identity(), Preprocessor::undersample(1),
                                           Preprocessor::moving_average(2)};
    const auto fitted = Preprocessor::chain(stages).fit(series({1, 2, 3}));
    EXPECT_EQ(values(fitted.transform(series({1, 2, 3}))), (std::vector<double>{1}));
    const std::vector<Preprocessor> unfitted{Preprocessor::identity(), Preprocessor::z_normalize()};
    try {
        Preprocessor::chain(unfitted).transform(series({1, 2}));
        FAIL();
    } catch (const StateError& e) {
        EXPECT_NE(std::string(e.what()).find("stage 1"), std::string::npos) << e.what();
    }
}

TEST(Preprocessor, PropertiesOverRandomInputs) {
    std::mt19937_64 rng(5);
    const std::vector<Preprocessor> kinds{Preprocessor::identity(),         Preprocessor::z_normalize(),
                                          Preprocessor::min_max(),          Preprocessor::moving_average(5),
                                          Preprocessor::exp_smoothing(0.3), Preprocessor::undersample(17)};
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + rng() % 60;
        const auto train = testing_support::gaussian_series(n, rng());
        const auto test_values = testing_support::gaussian_series(n + 3, rng());
        const TimeSeries test(test_values);
        for (const auto& kind : kinds) {
            const auto fitted = kind.fit(series(train));
            const auto out = values(fitted.transform(test));
            EXPECT_EQ(values(test), test_values);  // input untouched
            const bool resamples = std::holds_alternative<Undersample>(kind.steps().front());
            EXPECT_EQ(out.size(), resamples ? std::min<std::size_t>(17, test.size()) : test.size());
            for (double v : out) EXPECT_TRUE(std::isfinite(v));
            if (std::holds_alternative<MinMax>(kind.steps().front())) {
                for (double v : out) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
            }
            EXPECT_EQ(out, values(kind.fit(series(train)).transform(test)));
        }
    }
}
