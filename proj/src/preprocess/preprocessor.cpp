#include "tsad/preprocess/preprocessor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsad/core/format.hpp"
#include "tsad/error.hpp"

namespace tsad::preprocess {

namespace {

constexpr double kDegenerateScale = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Prefix sums of the series shifted by its mean; keeps windowed sums well
// conditioned for series with a large offset.
struct CenteredPrefix {
    double offset = 0.0;
    std::vector<double> sum;
    std::vector<double> sum_sq;

    CenteredPrefix(std::span<const double> x, bool squares) : offset(mean_of(x)) {
        sum.assign(x.size() + 1, 0.0);
        if (squares) sum_sq.assign(x.size() + 1, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = x[i] - offset;
            sum[i + 1] = sum[i] + c;
            if (squares) sum_sq[i + 1] = sum_sq[i] + c * c;
        }
    }
};

std::vector<std::size_t> undersample_indices(std::size_t n, std::size_t k) {
    if (k >= n) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    if (k == 1) return {0};
    std::vector<std::size_t> idx(k);
    const std::size_t span = n - 1;
    const std::size_t denom = k - 1;
    for (std::size_t i = 0; i < k; ++i) {
        // round(i * span / denom), halves rounded up, in exact integer arithmetic
        idx[i] = (2 * i * span + denom) / (2 * denom);
    }
    return idx;
}

std::vector<double> apply_step(const Step& step, std::span<const double> x) {
    return std::visit(
        overloaded{
            [&](const Identity&) { return std::vector<double>(x.begin(), x.end()); },
            [&](const ZNormalize& z) {
                if (!z.state) throw StateError("ZNormalize used before fit");
                std::vector<double> out(x.size(), 0.0);
                if (z.state->sd < kDegenerateScale) return out;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    out[i] = (x[i] - z.state->mean) / z.state->sd;
                }
                return out;
            },
            [&](const MinMax& mm) {
                if (!mm.state) throw StateError("MinMax used before fit");
                const double range = mm.state->max - mm.state->min;
                std::vector<double> out(x.size(), 0.5);
                if (range < kDegenerateScale) return out;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    out[i] = std::clamp((x[i] - mm.state->min) / range, 0.0, 1.0);
                }
                return out;
            },
            [&](const MovingAverage& ma) { return moving_mean(x, ma.window); },
            [&](const ExpSmoothing& es) {
                std::vector<double> out(x.size());
                out[0] = x[0];
                for (std::size_t t = 1; t < x.size(); ++t) {
                    out[t] = es.alpha * x[t] + (1.0 - es.alpha) * out[t - 1];
                }
                return out;
            },
            [&](const Undersample& us) {
                const auto idx = undersample_indices(x.size(), us.n_samples);
                std::vector<double> out(idx.size());
                for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
                return out;
            },
        },
        step);
}

Step fit_step(const Step& step, std::span<const double> train) {
    return std::visit(
        overloaded{
            [&](const ZNormalize&) -> Step {
                const double mu = mean_of(train);
                double ss = 0.0;
                for (double v : train) ss += (v - mu) * (v - mu);
                return ZNormalize{ZNormalize::State{mu, std::sqrt(ss / static_cast<double>(train.size()))}};
            },
            [&](const MinMax&) -> Step {
                const auto [lo, hi] = std::minmax_element(train.begin(), train.end());
                return MinMax{MinMax::State{*lo, *hi}};
            },
            [&](const auto& stateless) -> Step { return stateless; },
        },
        step);
}

std::string describe(const Step& step) {
    return std::visit(
        overloaded{
            [](const Identity&) { return std::string("Identity"); },
            [](const ZNormalize&) { return std::string("ZNormalize"); },
            [](const MinMax&) { return std::string("MinMax"); },
            [](const MovingAverage& ma) {
                return "MovingAverage(window=" + std::to_string(ma.window) + ")";
            },
            [](const ExpSmoothing& es) {
                return "ExpSmoothing(alpha=" + core::format_real(es.alpha) + ")";
            },
            [](const Undersample& us) {
                return "Undersample(n_samples=" + std::to_string(us.n_samples) + ")";
            },
        },
        step);
}

}  // namespace

std::pair<std::size_t, std::size_t> centered_window(std::size_t i, std::size_t n, std::size_t width) {
    const std::size_t left = width / 2;
    const std::size_t right = width - 1 - left;
    const std::size_t first = i >= left ? i - left : 0;
    const std::size_t last = std::min(n, i + right + 1);
    return {first, last};
}

std::vector<double> moving_mean(std::span<const double> x, std::size_t width) {
    if (width < 1) throw ParameterError("moving window must be >= 1");
    const CenteredPrefix prefix(x, false);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto [first, last] = centered_window(i, x.size(), width);
        const double count = static_cast<double>(last - first);
        out[i] = prefix.offset + (prefix.sum[last] - prefix.sum[first]) / count;
    }
    return out;
}

std::vector<double> moving_std(std::span<const double> x, std::size_t width) {
    if (width < 1) throw ParameterError("moving window must be >= 1");
    const CenteredPrefix prefix(x, true);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto [first, last] = centered_window(i, x.size(), width);
        const double count = static_cast<double>(last - first);
        const double m = (prefix.sum[last] - prefix.sum[first]) / count;
        const double m2 = (prefix.sum_sq[last] - prefix.sum_sq[first]) / count;
        out[i] = std::sqrt(std::max(0.0, m2 - m * m));
    }
    return out;
}

Preprocessor Preprocessor::identity() { return Preprocessor({Identity{}}); }
Preprocessor Preprocessor::z_normalize() { return Preprocessor({ZNormalize{}}); }
Preprocessor Preprocessor::min_max() { return Preprocessor({MinMax{}}); }

Preprocessor Preprocessor::moving_average(std::size_t window) {
    if (window < 1) throw ParameterError("MovingAverage window must be >= 1");
    return Preprocessor({MovingAverage{window}});
}

Preprocessor Preprocessor::exp_smoothing(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("ExpSmoothing alpha must lie in (0, 1], got " + core::format_real(alpha));
    }
    return Preprocessor({ExpSmoothing{alpha}});
}

Preprocessor Preprocessor::undersample(std::size_t n_samples) {
    if (n_samples < 1) throw ParameterError("Undersample n_samples must be >= 1");
    return Preprocessor({Undersample{n_samples}});
}

Preprocessor Preprocessor::chain(std::span<const Preprocessor> stages) {
    if (stages.empty()) throw ParameterError("cannot chain an empty list of preprocessors");
    std::vector<Step> steps;
    for (const auto& stage : stages) {
        steps.insert(steps.end(), stage.steps_.begin(), stage.steps_.end());
    }
    return Preprocessor(std::move(steps));
}

Preprocessor Preprocessor::fit(const TimeSeries& train) const {
    std::vector<Step> fitted;
    fitted.reserve(steps_.size());
    std::vector<double> current(train.begin(), train.end());
    for (std::size_t s = 0; s < steps_.size(); ++s) {
        try {
            fitted.push_back(fit_step(steps_[s], current));
            if (s + 1 < steps_.size()) current = apply_step(fitted.back(), current);
        } catch (...) {
            if (steps_.size() == 1) throw;
            rethrow_with_prefix("preprocessing stage " + std::to_string(s) + ": ");
        }
    }
    return Preprocessor(std::move(fitted));
}

TimeSeries Preprocessor::transform(const TimeSeries& x) const {
    std::vector<double> current(x.begin(), x.end());
    for (std::size_t s = 0; s < steps_.size(); ++s) {
        try {
            current = apply_step(steps_[s], current);
        } catch (...) {
            if (steps_.size() == 1) throw;
            rethrow_with_prefix("preprocessing stage " + std::to_string(s) + ": ");
        }
    }
    return TimeSeries(std::move(current));
}

std::vector<std::size_t> Preprocessor::kept_indices(std::size_t n) const {
    std::vector<std::size_t> kept(n);
    std::iota(kept.begin(), kept.end(), std::size_t{0});
    for (const auto& step : steps_) {
        if (const auto* us = std::get_if<Undersample>(&step)) {
            const auto idx = undersample_indices(kept.size(), us->n_samples);
            std::vector<std::size_t> next(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) next[i] = kept[idx[i]];
            kept = std::move(next);
        }
    }
    return kept;
}

bool Preprocessor::is_fitted() const noexcept {
    return std::all_of(steps_.begin(), steps_.end(), [](const Step& step) {
        if (const auto* z = std::get_if<ZNormalize>(&step)) return z->state.has_value();
        if (const auto* mm = std::get_if<MinMax>(&step)) return mm->state.has_value();
        return true;
    });
}

std::string Preprocessor::descriptor() const {
    std::string out;
    for (std::size_t s = 0; s < steps_.size(); ++s) {
        if (s > 0) out += "->";
        out += describe(steps_[s]);
    }
    return out;
}

}  // namespace tsad::preprocess
