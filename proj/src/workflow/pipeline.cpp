#include "tsad/workflow/pipeline.hpp"

#include "tsad/error.hpp"

namespace tsad::workflow {

Pipeline::Pipeline(preprocess::Preprocessor preprocessor, std::unique_ptr<detect::Detector> detector)
    : preprocessor_(std::move(preprocessor)), detector_(std::move(detector)) {
    if (!detector_) throw ParameterError("pipeline needs a detector");
}

Pipeline& Pipeline::fit(const TimeSeries& train) {
    TimeSeries transformed = train;
    try {
        preprocessor_ = preprocessor_.fit(train);
        transformed = preprocessor_.transform(train);
    } catch (...) {
        rethrow_with_prefix("preprocessor " + preprocessor_.descriptor() + ": ");
    }
    try {
        detector_->fit(transformed);
    } catch (...) {
        rethrow_with_prefix("fit: ");
    }
    return *this;
}

AnomalyScores Pipeline::decision_function(const TimeSeries& x) const {
    TimeSeries transformed = x;
    try {
        transformed = preprocessor_.transform(x);
    } catch (...) {
        rethrow_with_prefix("preprocessor " + preprocessor_.descriptor() + ": ");
    }
    try {
        return detector_->decision_function(transformed);
    } catch (...) {
        rethrow_with_prefix("predict: ");
    }
}

Labels Pipeline::transform_labels(const Labels& labels) const {
    const auto kept = preprocessor_.kept_indices(labels.size());
    Labels out(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) out[i] = labels[kept[i]];
    return out;
}

PipelineOutput pipeline_fit_predict(Pipeline& pipeline, const Dataset& dataset) {
    pipeline.fit(dataset.x_train);
    PipelineOutput out;
    out.scores = pipeline.decision_function(dataset.x_test);
    out.labels = pipeline.transform_labels(dataset.y_test);
    return out;
}

}  // namespace tsad::workflow
