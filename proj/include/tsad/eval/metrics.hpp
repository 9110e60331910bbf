#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "tsad/core/time_series.hpp"
#include "tsad/eval/thresholding.hpp"

namespace tsad::eval {

using core::Label;

// Area under the ROC curve, ties counted 1/2. Empty when `y` has one class.
std::optional<double> auc_roc(std::span<const Label> y, std::span<const double> scores);

// Average precision over descending distinct score thresholds. Empty when
// `y` has no positive.
std::optional<double> auc_pr(std::span<const Label> y, std::span<const double> scores);

struct BinaryScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Degenerate denominators yield 0 rather than an undefined value.
BinaryScores binary_metrics(std::span<const Label> y, std::span<const Label> predicted);

/// A named evaluation measure over (ground truth, continuous scores). An
/// empty result means the measure is undefined for that ground truth.
class Metric {
public:
    virtual ~Metric() = default;
    virtual std::string name() const = 0;
    virtual std::optional<double> compute(std::span<const Label> y,
                                          std::span<const double> scores) const = 0;
};

class AucRocMetric final : public Metric {
public:
    std::string name() const override { return "AucRoc"; }
    std::optional<double> compute(std::span<const Label> y, std::span<const double> scores) const override {
        return auc_roc(y, scores);
    }
};

class AucPrMetric final : public Metric {
public:
    std::string name() const override { return "AucPr"; }
    std::optional<double> compute(std::span<const Label> y, std::span<const double> scores) const override {
        return auc_pr(y, scores);
    }
};

// Precision, recall or F1 of the labels produced by a thresholder.
class ThresholdMetric final : public Metric {
public:
    enum class Kind { precision, recall, f1 };

    ThresholdMetric(Kind kind, Thresholder thresholder)
        : kind_(kind), thresholder_(std::move(thresholder)) {}

    std::string name() const override;
    std::optional<double> compute(std::span<const Label> y, std::span<const double> scores) const override;

private:
    Kind kind_;
    Thresholder thresholder_;
};

}  // namespace tsad::eval
