#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tsad/core/time_series.hpp"

namespace tsad::preprocess {

using core::TimeSeries;

// Half-open [first, last) bounds of the centred window of width `width`
// around `i`, clipped to [0, n). Even widths lean one sample to the left.
std::pair<std::size_t, std::size_t> centered_window(std::size_t i, std::size_t n, std::size_t width);

// Edge-clipped centred moving mean / population standard deviation.
std::vector<double> moving_mean(std::span<const double> x, std::size_t width);
std::vector<double> moving_std(std::span<const double> x, std::size_t width);

struct Identity {};

struct ZNormalize {
    struct State {
        double mean = 0.0;
        double sd = 0.0;  // population
    };
    std::optional<State> state;
};

struct MinMax {
    struct State {
        double min = 0.0;
        double max = 0.0;
    };
    std::optional<State> state;
};

struct MovingAverage {
    std::size_t window = 1;
};

struct ExpSmoothing {
    double alpha = 1.0;
};

struct Undersample {
    std::size_t n_samples = 1;
};

using Step = std::variant<Identity, ZNormalize, MinMax, MovingAverage, ExpSmoothing, Undersample>;

/// An ordered chain of preprocessing steps (a single step is a chain of one).
///
/// `fit` never mutates: it returns a new value whose scalers hold statistics
/// of the training series, each step fitted on the output of the previous
/// ones. `transform` applies the steps in order and reuses those statistics.
class Preprocessor {
public:
    static Preprocessor identity();
    static Preprocessor z_normalize();
    static Preprocessor min_max();
    static Preprocessor moving_average(std::size_t window);
    static Preprocessor exp_smoothing(double alpha);
    static Preprocessor undersample(std::size_t n_samples);
    static Preprocessor chain(std::span<const Preprocessor> stages);

    Preprocessor fit(const TimeSeries& train) const;
    TimeSeries transform(const TimeSeries& x) const;

    /// Positions of the input that survive `transform` for an input of length n.
    std::vector<std::size_t> kept_indices(std::size_t n) const;

    bool is_fitted() const noexcept;
    const std::vector<Step>& steps() const noexcept { return steps_; }
    std::string descriptor() const;

private:
    explicit Preprocessor(std::vector<Step> steps) : steps_(std::move(steps)) {}

    std::vector<Step> steps_;
};

}  // namespace tsad::preprocess
