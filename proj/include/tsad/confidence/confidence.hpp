#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsad/core/time_series.hpp"
#include "tsad/detect/detector.hpp"

namespace tsad::confidence {

struct ConfidenceScores {
    std::vector<double> confidence;  // in [0, 1], one per test observation
    core::Labels prediction;         // 1 = outlier; what `confidence` refers to
};

// P[X >= k] for X ~ Binomial(n, p).
double binomial_upper_tail(std::size_t n, std::size_t k, double p);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::span<const double> values, double q);

/// Example-wise confidence of outlier/inlier predictions from a contamination
/// rate gamma in (0, 1).
///
/// For a test score s with n reference scores, the smoothed exceed
/// probability is p(s) = (1 + #{reference <= s}) / (n + 2), and the outlier
/// confidence is the binomial tail P[Bin(n, p(s)) >= ceil(n (1 - gamma))].
/// A score is predicted an outlier when it exceeds the (1 - gamma)-quantile of
/// the reference scores; inliers report 1 minus the outlier confidence.
ConfidenceScores exceed_confidence(std::span<const double> train_scores,
                                   std::span<const double> test_scores, double gamma);

// Outlier confidence C_out(s) for each test score, without the prediction step.
std::vector<double> outlier_confidence(std::span<const double> train_scores,
                                       std::span<const double> test_scores, double gamma);

/// Runs `exceed_confidence` with the detector's reference scores on `train`
/// and its decision scores on `test`.
ConfidenceScores detector_confidence(const detect::Detector& detector, const core::TimeSeries& train,
                                     const core::TimeSeries& test, double gamma);

}  // namespace tsad::confidence
