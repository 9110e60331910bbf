#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsad/core/loader.hpp"
#include "tsad/detect/detector.hpp"
#include "tsad/eval/metrics.hpp"
#include "tsad/preprocess/preprocessor.hpp"
#include "tsad/workflow/profiling.hpp"

namespace tsad::workflow {

struct MetricResult {
    std::string name;
    std::optional<double> value;  // empty: undefined for this ground truth
};

enum class JobStatus { ok, error };

// One cell of the benchmark grid.
struct JobResult {
    std::string dataset;
    std::string preprocessor;
    std::string detector;
    std::vector<MetricResult> metrics;  // request order; empty on error
    std::optional<double> fit_time_s;
    std::optional<double> predict_time_s;
    std::optional<std::size_t> peak_memory_bytes;
    JobStatus status = JobStatus::ok;
    std::string error_message;
    std::vector<std::string> warnings;
};

struct WorkflowOptions {
    // Run jobs concurrently. Peak memory cannot be attributed to a single job
    // then, so it is reported absent.
    bool parallel = false;
    unsigned threads = 0;  // parallel mode only; 0 = hardware concurrency
    MemorySource memory = MemorySource::automatic;
};

/// Grid benchmark over datasets x preprocessors x detectors.
///
/// Every cell gets a fresh copy of its detector prototype, is fitted on the
/// dataset's training part and scored on its test part, and is evaluated with
/// every metric. Any exception inside a cell becomes an error row; the other
/// cells are unaffected. Results are ordered dataset-major, then
/// preprocessor, then detector, in both sequential and parallel mode.
class Workflow {
public:
    Workflow(std::vector<std::shared_ptr<core::DataLoader>> datasets,
             std::vector<preprocess::Preprocessor> preprocessors,
             std::vector<std::shared_ptr<const detect::Detector>> detectors,
             std::vector<std::shared_ptr<const eval::Metric>> metrics, WorkflowOptions options = {});

    std::vector<JobResult> run() const;

    std::size_t job_count() const noexcept;
    std::vector<std::string> metric_names() const;

private:
    JobResult run_job(std::size_t index) const;

    std::vector<std::shared_ptr<core::DataLoader>> datasets_;
    std::vector<preprocess::Preprocessor> preprocessors_;
    std::vector<std::shared_ptr<const detect::Detector>> detectors_;
    std::vector<std::shared_ptr<const eval::Metric>> metrics_;
    WorkflowOptions options_;
};

std::vector<JobResult> run_workflow(std::vector<std::shared_ptr<core::DataLoader>> datasets,
                                    std::vector<preprocess::Preprocessor> preprocessors,
                                    std::vector<std::shared_ptr<const detect::Detector>> detectors,
                                    std::vector<std::shared_ptr<const eval::Metric>> metrics,
                                    WorkflowOptions options = {});

/// Header line of the results table for the given metric columns.
std::string results_csv_header(std::span<const std::string> metric_names);

/// Results table: one header line, one row per job. Undefined metrics render
/// as `NA`; absent measurements and the metrics of error rows are empty.
std::string results_csv(std::span<const JobResult> results, std::span<const std::string> metric_names);

void write_results_csv(std::span<const JobResult> results, std::span<const std::string> metric_names,
                       const std::filesystem::path& path);

}  // namespace tsad::workflow
