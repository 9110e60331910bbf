#include "tsad/detect/detector.hpp"

#include <algorithm>
#include <cmath>

#include "tsad/error.hpp"

namespace tsad::detect {

AnomalyScores normalize_scores(std::span<const double> scores) {
    if (scores.empty()) return {};
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double range = *hi - *lo;
    AnomalyScores out(scores.size(), 0.5);
    if (!(range >= 1e-12)) return out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::clamp((scores[i] - *lo) / range, 0.0, 1.0);
    }
    return out;
}

Detector& Detector::fit(const TimeSeries& train, std::span<const Label> /*labels*/) {
    fitted_ = false;
    do_fit(train.values());
    fitted_ = true;
    return *this;
}

AnomalyScores Detector::decision_function(const TimeSeries& x) const {
    if (!fitted_) throw StateError(descriptor() + ": decision_function called before fit");
    auto scores = do_decision_function(x.values());
    if (scores.size() != x.size()) {
        throw Error(descriptor() + ": produced " + std::to_string(scores.size()) +
                    " scores for " + std::to_string(x.size()) + " observations");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw Error(descriptor() + ": non-finite score at index " + std::to_string(i));
        }
    }
    return scores;
}

AnomalyScores Detector::predict_proba(const TimeSeries& x) const {
    return normalize_scores(decision_function(x));
}

AnomalyScores Detector::reference_scores(const TimeSeries& train) const {
    return decision_function(train);
}

void WindowedDetector::resolve_window(std::span<const double> train) {
    if (window_spec_.is_fft()) {
        const auto estimate = estimate_window_fft(train);
        window_ = estimate.window;
        window_fallback_ = estimate.fallback;
    } else {
        window_ = window_spec_.value();
        window_fallback_ = false;
    }
    if (train.size() < 2 * window_) {
        throw ValidationError(descriptor() + ": training series too short for window m=" +
                              std::to_string(window_) + " (need n_train >= " +
                              std::to_string(2 * window_) + ", got n_train=" +
                              std::to_string(train.size()) + ")");
    }
}

void WindowedDetector::check_length(std::span<const double> x) const {
    if (x.size() < window_) {
        throw ValidationError(descriptor() + ": series of length " + std::to_string(x.size()) +
                              " is shorter than the window m=" + std::to_string(window_));
    }
}

}  // namespace tsad::detect
