#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsad/detect/detector.hpp"

namespace tsad::detect {

// Mean z-normalized distance of each test subsequence to its k nearest
// training subsequences, spread to points by reverse windowing.
class KnnWindowsDetector final : public DetectorMixin<KnnWindowsDetector, WindowedDetector> {
public:
    static constexpr std::size_t kDefaultNeighbors = 5;

    explicit KnnWindowsDetector(WindowSize window = WindowSize::fft(),
                                std::size_t neighbors = kDefaultNeighbors, unsigned threads = 0);

    AnomalyScores reference_scores(const TimeSeries& train) const override;
    std::string descriptor() const override;
    std::size_t neighbors() const noexcept { return neighbors_; }

protected:
    void do_fit(std::span<const double> train) override;
    AnomalyScores do_decision_function(std::span<const double> x) const override;

private:
    std::size_t neighbors_;
    unsigned threads_;
    std::vector<double> reference_;
};

// Equal-width histogram of the training values; a point scores
// -log(frequency of its bin + 1e-9). Out-of-range values use the edge bin.
class HistogramDetector final : public DetectorMixin<HistogramDetector> {
public:
    static constexpr std::size_t kDefaultBins = 32;
    static constexpr double kEpsilon = 1e-9;

    explicit HistogramDetector(std::size_t bins = kDefaultBins);

    std::string descriptor() const override;
    std::size_t bins() const noexcept { return bins_; }
    std::size_t bin_of(double value) const noexcept;

protected:
    void do_fit(std::span<const double> train) override;
    AnomalyScores do_decision_function(std::span<const double> x) const override;

private:
    std::size_t bins_;
    double low_ = 0.0;
    double width_ = 0.0;
    std::vector<double> frequency_;
};

// |x[t] - local mean| / (local sd + 1e-9) over a centred window of the
// scored series itself. Fit only resolves the window.
class MovingZScoreDetector final : public DetectorMixin<MovingZScoreDetector, WindowedDetector> {
public:
    explicit MovingZScoreDetector(WindowSize window = WindowSize::fft());

    std::string descriptor() const override;

protected:
    void do_fit(std::span<const double> train) override;
    AnomalyScores do_decision_function(std::span<const double> x) const override;
};

}  // namespace tsad::detect
