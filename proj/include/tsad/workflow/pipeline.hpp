#pragma once

#include <memory>

#include "tsad/core/time_series.hpp"
#include "tsad/detect/detector.hpp"
#include "tsad/preprocess/preprocessor.hpp"

namespace tsad::workflow {

using core::Dataset;
using core::Labels;
using core::TimeSeries;
using detect::AnomalyScores;

/// Preprocessing chain followed by a detector, driven as one unit. Fit fits
/// the preprocessor on the training series and the detector on its output;
/// scoring transforms first, so scores follow the transformed length.
class Pipeline {
public:
    Pipeline(preprocess::Preprocessor preprocessor, std::unique_ptr<detect::Detector> detector);

    Pipeline& fit(const TimeSeries& train);
    AnomalyScores decision_function(const TimeSeries& x) const;

    /// Re-indexes labels the way `transform` re-indexes values.
    Labels transform_labels(const Labels& labels) const;

    const preprocess::Preprocessor& preprocessor() const noexcept { return preprocessor_; }
    const detect::Detector& detector() const noexcept { return *detector_; }

private:
    preprocess::Preprocessor preprocessor_;
    std::unique_ptr<detect::Detector> detector_;
};

struct PipelineOutput {
    AnomalyScores scores;
    Labels labels;  // y_test aligned with `scores`
};

PipelineOutput pipeline_fit_predict(Pipeline& pipeline, const Dataset& dataset);

}  // namespace tsad::workflow
