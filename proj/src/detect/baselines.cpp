#include "tsad/detect/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "tsad/detect/matrix_profile.hpp"
#include "tsad/error.hpp"
#include "tsad/preprocess/preprocessor.hpp"

namespace tsad::detect {

KnnWindowsDetector::KnnWindowsDetector(WindowSize window, std::size_t neighbors, unsigned threads)
    : DetectorMixin(window), neighbors_(neighbors), threads_(threads) {
    if (neighbors_ < 1) throw ParameterError("KNNWindows k must be >= 1");
}

std::string KnnWindowsDetector::descriptor() const {
    return "KNNWindows(window_size=" + window_spec().to_string() + ",k=" + std::to_string(neighbors_) + ")";
}

void KnnWindowsDetector::do_fit(std::span<const double> train) {
    resolve_window(train);
    reference_.assign(train.begin(), train.end());
}

AnomalyScores KnnWindowsDetector::do_decision_function(std::span<const double> x) const {
    check_length(x);
    const std::size_t m = window();
    return reverse_window(knn_distance_ab(x, reference_, m, neighbors_, threads_), m, x.size());
}

AnomalyScores KnnWindowsDetector::reference_scores(const TimeSeries& train) const {
    if (!is_fitted()) throw StateError(descriptor() + ": reference_scores called before fit");
    const std::size_t m = window();
    return reverse_window(knn_distance_self(train.values(), m, neighbors_, threads_), m, train.size());
}

HistogramDetector::HistogramDetector(std::size_t bins) : bins_(bins) {
    if (bins_ < 1) throw ParameterError("Histogram bins must be >= 1");
}

std::string HistogramDetector::descriptor() const {
    return "Histogram(bins=" + std::to_string(bins_) + ")";
}

std::size_t HistogramDetector::bin_of(double value) const noexcept {
    if (!(width_ > 0.0)) return 0;
    const double pos = std::floor((value - low_) / width_);
    if (pos <= 0.0) return 0;
    return std::min(bins_ - 1, static_cast<std::size_t>(pos));
}

void HistogramDetector::do_fit(std::span<const double> train) {
    const auto [lo, hi] = std::minmax_element(train.begin(), train.end());
    low_ = *lo;
    width_ = (*hi - *lo) / static_cast<double>(bins_);
    frequency_.assign(bins_, 0.0);
    for (double v : train) frequency_[bin_of(v)] += 1.0;
    for (double& f : frequency_) f /= static_cast<double>(train.size());
}

AnomalyScores HistogramDetector::do_decision_function(std::span<const double> x) const {
    AnomalyScores out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = -std::log(frequency_[bin_of(x[i])] + kEpsilon);
    }
    return out;
}

MovingZScoreDetector::MovingZScoreDetector(WindowSize window) : DetectorMixin(window) {}

std::string MovingZScoreDetector::descriptor() const {
    return "MovingZScore(window_size=" + window_spec().to_string() + ")";
}

void MovingZScoreDetector::do_fit(std::span<const double> train) { resolve_window(train); }

AnomalyScores MovingZScoreDetector::do_decision_function(std::span<const double> x) const {
    check_length(x);
    const auto mean = preprocess::moving_mean(x, window());
    const auto sd = preprocess::moving_std(x, window());
    AnomalyScores out(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        out[t] = std::abs(x[t] - mean[t]) / (sd[t] + 1e-9);
    }
    return out;
}

}  // namespace tsad::detect
