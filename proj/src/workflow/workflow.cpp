#include "tsad/workflow/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "tsad/core/format.hpp"
#include "tsad/error.hpp"
#include "tsad/workflow/pipeline.hpp"

namespace tsad::workflow {

Workflow::Workflow(std::vector<std::shared_ptr<core::DataLoader>> datasets,
                   std::vector<preprocess::Preprocessor> preprocessors,
                   std::vector<std::shared_ptr<const detect::Detector>> detectors,
                   std::vector<std::shared_ptr<const eval::Metric>> metrics, WorkflowOptions options)
    : datasets_(std::move(datasets)),
      preprocessors_(std::move(preprocessors)),
      detectors_(std::move(detectors)),
      metrics_(std::move(metrics)),
      options_(options) {
    if (datasets_.empty()) throw ConfigError("workflow needs at least one dataset");
    if (preprocessors_.empty()) throw ConfigError("workflow needs at least one preprocessor");
    if (detectors_.empty()) throw ConfigError("workflow needs at least one detector");
    if (metrics_.empty()) throw ConfigError("workflow needs at least one metric");
    for (const auto& d : datasets_) {
        if (!d) throw ConfigError("workflow dataset list contains a null loader");
    }
    for (const auto& d : detectors_) {
        if (!d) throw ConfigError("workflow detector list contains a null detector");
    }
    for (const auto& m : metrics_) {
        if (!m) throw ConfigError("workflow metric list contains a null metric");
    }
}

std::size_t Workflow::job_count() const noexcept {
    return datasets_.size() * preprocessors_.size() * detectors_.size();
}

std::vector<std::string> Workflow::metric_names() const {
    std::vector<std::string> names;
    for (const auto& m : metrics_) names.push_back(m->name());
    return names;
}

JobResult Workflow::run_job(std::size_t index) const {
    const std::size_t per_dataset = preprocessors_.size() * detectors_.size();
    const auto& loader = *datasets_[index / per_dataset];
    const auto& pre = preprocessors_[(index % per_dataset) / detectors_.size()];
    const auto& proto = *detectors_[index % detectors_.size()];

    JobResult job;
    job.dataset = loader.name();
    job.preprocessor = pre.descriptor();
    job.detector = proto.descriptor();

    try {
        const auto data = loader.load();
        job.dataset = data->name;
        Pipeline pipeline(pre, proto.clone());
        AnomalyScores scores;
        const auto source = options_.parallel ? MemorySource::none : options_.memory;
        const auto measured = measure_job([&] { pipeline.fit(data->x_train); },
                                          [&] { scores = pipeline.decision_function(data->x_test); },
                                          source);
        job.fit_time_s = measured.fit_time_s;
        job.predict_time_s = measured.predict_time_s;
        job.peak_memory_bytes = measured.peak_memory_bytes;

        const auto labels = pipeline.transform_labels(data->y_test);
        for (const auto& metric : metrics_) {
            auto value = metric->compute(labels, scores);
            if (!value) job.warnings.push_back(metric->name() + " is undefined for this ground truth");
            job.metrics.push_back({metric->name(), value});
        }
        job.status = JobStatus::ok;
    } catch (const std::exception& e) {
        job.status = JobStatus::error;
        job.error_message = *e.what() != '\0' ? e.what() : "unknown error";
    } catch (...) {
        job.status = JobStatus::error;
        job.error_message = "unknown non-standard exception";
    }
    if (job.status == JobStatus::error) job.metrics.clear();
    return job;
}

std::vector<JobResult> Workflow::run() const {
    const std::size_t jobs = job_count();
    std::vector<JobResult> results(jobs);
    if (!options_.parallel) {
        for (std::size_t j = 0; j < jobs; ++j) results[j] = run_job(j);
        return results;
    }

    unsigned workers = options_.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                             : options_.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < jobs; j = next++) results[j] = run_job(j);
            });
        }
    }
    return results;
}

std::vector<JobResult> run_workflow(std::vector<std::shared_ptr<core::DataLoader>> datasets,
                                    std::vector<preprocess::Preprocessor> preprocessors,
                                    std::vector<std::shared_ptr<const detect::Detector>> detectors,
                                    std::vector<std::shared_ptr<const eval::Metric>> metrics,
                                    WorkflowOptions options) {
    return Workflow(std::move(datasets), std::move(preprocessors), std::move(detectors),
                    std::move(metrics), options)
        .run();
}

std::string results_csv_header(std::span<const std::string> metric_names) {
    std::string out = "dataset,preprocessor,detector";
    for (const auto& name : metric_names) out += "," + core::csv_escape(name);
    out += ",fit_time_s,predict_time_s,peak_memory_bytes,status,error_message";
    return out;
}

std::string results_csv(std::span<const JobResult> results, std::span<const std::string> metric_names) {
    std::string out = results_csv_header(metric_names) + "\n";
    for (const auto& job : results) {
        out += core::csv_escape(job.dataset) + "," + core::csv_escape(job.preprocessor) + "," +
               core::csv_escape(job.detector);
        for (std::size_t k = 0; k < metric_names.size(); ++k) {
            out += ",";
            if (job.status != JobStatus::ok || k >= job.metrics.size()) continue;
            const auto& value = job.metrics[k].value;
            out += value ? core::format_real(*value) : "NA";
        }
        out += ",";
        if (job.fit_time_s) out += core::format_real(*job.fit_time_s);
        out += ",";
        if (job.predict_time_s) out += core::format_real(*job.predict_time_s);
        out += ",";
        if (job.peak_memory_bytes) out += std::to_string(*job.peak_memory_bytes);
        out += job.status == JobStatus::ok ? ",ok," : ",error,";
        out += core::csv_escape(job.error_message);
        out += "\n";
    }
    return out;
}

void write_results_csv(std::span<const JobResult> results, std::span<const std::string> metric_names,
                       const std::filesystem::path& path) {
    if (results.empty()) throw ValidationError("no results to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << results_csv(results, metric_names);
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace tsad::workflow
