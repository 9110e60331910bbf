#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "tsad/core/loader.hpp"
#include "tsad/detect/baselines.hpp"
#include "tsad/detect/matrix_profile.hpp"
#include "tsad/error.hpp"
#include "tsad/eval/metrics.hpp"
#include "tsad/workflow/pipeline.hpp"
#include "tsad/workflow/profiling.hpp"
#include "tsad/workflow/workflow.hpp"

using namespace tsad;
using namespace tsad::workflow;
using detect::WindowSize;

namespace {

class ThrowingDetector final : public detect::DetectorMixin<ThrowingDetector> {
public:
    explicit ThrowingDetector(bool non_standard = false) : non_standard_(non_standard) {}
    std::string descriptor() const override { return non_standard_ ? "Panics" : "Throws, \"loudly\""; }

protected:
    void do_fit(std::span<const double>) override {
        if (non_standard_) throw 42;
        throw std::runtime_error("boom, with \"quotes\"");
    }
    detect::AnomalyScores do_decision_function(std::span<const double> x) const override {
        return detect::AnomalyScores(x.size(), 0.0);
    }

private:
    bool non_standard_;
};

// Holds a buffer of `doubles` values alive during fit.
class AllocatingDetector final : public detect::DetectorMixin<AllocatingDetector> {
public:
    explicit AllocatingDetector(std::size_t doubles) : doubles_(doubles) {}
    std::string descriptor() const override { return "Allocating"; }

protected:
    void do_fit(std::span<const double> train) override {
        std::vector<double> buffer(doubles_, 1.0);
        sink_ = buffer[doubles_ / 2] + train[0];
    }
    detect::AnomalyScores do_decision_function(std::span<const double> x) const override {
        return detect::AnomalyScores(x.begin(), x.end());
    }

private:
    std::size_t doubles_;
    double sink_ = 0.0;
};

std::shared_ptr<core::DataLoader> synthetic(std::uint64_t seed, std::size_t n = 600) {
    core::SyntheticSpec spec;
    spec.n = n;
    spec.period = 25;
    spec.anomaly_start = n / 2 + n / 4;
    spec.anomaly_len = 30;
    spec.seed = seed;
    return std::make_shared<core::SyntheticLoader>(spec);
}

std::vector<std::shared_ptr<const eval::Metric>> two_metrics() {
    return {std::make_shared<eval::AucRocMetric>(), std::make_shared<eval::AucPrMetric>()};
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Pipeline, IdentityMatchesDetector) {
    const auto data = synthetic(1)->load();
    Pipeline p(preprocess::Preprocessor::identity(), std::make_unique<detect::MatrixProfileDetector>(WindowSize::fixed(25)));
    const auto out = pipeline_fit_predict(p, *data);
    detect::MatrixProfileDetector direct(WindowSize::fixed(25));
    direct.fit(data->x_train);
    EXPECT_EQ(out.scores, direct.decision_function(data->x_test));
    EXPECT_EQ(out.labels, data->y_test);
}

TEST(Pipeline, UndersampleRealignsLabels) {
    const auto data = synthetic(2)->load();
    Pipeline p(preprocess::Preprocessor::undersample(100), std::make_unique<detect::HistogramDetector>());
    const auto out = pipeline_fit_predict(p, *data);
    EXPECT_EQ(out.scores.size(), 100u);
    ASSERT_EQ(out.labels.size(), 100u);
    const auto kept = preprocess::Preprocessor::undersample(100).kept_indices(data->x_test.size());
    for (std::size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(out.labels[i], data->y_test[kept[i]]);
}

TEST(Pipeline, ZNormalizeLeavesMatrixProfileUnchanged) {
    const auto data = synthetic(3)->load();
    const std::vector<preprocess::Preprocessor> stages{preprocess::Preprocessor::z_normalize()};
    Pipeline scaled(preprocess::Preprocessor::chain(stages),
                    std::make_unique<detect::MatrixProfileDetector>(WindowSize::fixed(25)));
    Pipeline raw(preprocess::Preprocessor::identity(), std::make_unique<detect::MatrixProfileDetector>(WindowSize::fixed(25)));
    const auto a = pipeline_fit_predict(scaled, *data).scores;
    const auto b = pipeline_fit_predict(raw, *data).scores;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6);
}

TEST(Pipeline, StageErrorsPropagate) {
    const auto data = synthetic(4)->load();
    Pipeline p(preprocess::Preprocessor::undersample(20), std::make_unique<detect::MatrixProfileDetector>(WindowSize::fixed(25)));
    EXPECT_THROW(pipeline_fit_predict(p, *data), ValidationError);
}

TEST(Workflow, GridOrderAndMetrics) {
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{synthetic(1), synthetic(2)};
    const std::vector<preprocess::Preprocessor> pres{preprocess::Preprocessor::identity(),
                                                     preprocess::Preprocessor::moving_average(3)};
    const std::vector<std::shared_ptr<const detect::Detector>> dets{
        std::make_shared<detect::MatrixProfileDetector>(WindowSize::fixed(25)),
        std::make_shared<detect::HistogramDetector>()};
    const auto results = run_workflow(datasets, pres, dets, two_metrics());
    ASSERT_EQ(results.size(), 8u);
    std::size_t idx = 0;
    for (std::size_t d = 0; d < 2; ++d) {
        for (std::size_t p = 0; p < 2; ++p) {
            for (std::size_t k = 0; k < 2; ++k, ++idx) {
                const auto& job = results[idx];
                EXPECT_EQ(job.dataset, datasets[d]->name());
                EXPECT_EQ(job.preprocessor, pres[p].descriptor());
                EXPECT_EQ(job.detector, dets[k]->descriptor());
                ASSERT_EQ(job.status, JobStatus::ok) << job.error_message;
                ASSERT_EQ(job.metrics.size(), 2u);
                EXPECT_GE(*job.fit_time_s, 0.0);
                EXPECT_GE(*job.predict_time_s, 0.0);
                // recompute outside the workflow
                Pipeline pipe(pres[p], dets[k]->clone());
                const auto out = pipeline_fit_predict(pipe, *datasets[d]->load());
                EXPECT_EQ(job.metrics[0].value, eval::auc_roc(out.labels, out.scores));
                EXPECT_EQ(job.metrics[1].value, eval::auc_pr(out.labels, out.scores));
            }
        }
    }
}

TEST(Workflow, FaultIsolation) {
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{synthetic(1), synthetic(2)};
    const std::vector<preprocess::Preprocessor> pres{preprocess::Preprocessor::identity()};
    const std::vector<std::shared_ptr<const detect::Detector>> dets{
        std::make_shared<ThrowingDetector>(),
        std::make_shared<detect::MatrixProfileDetector>(WindowSize::fixed(1000)),  // m > n_train / 2
        std::make_shared<ThrowingDetector>(true), std::make_shared<detect::HistogramDetector>()};
    const auto results = run_workflow(datasets, pres, dets, two_metrics());
    ASSERT_EQ(results.size(), 8u);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& job = results[i];
        if (i % 4 == 3) {
            EXPECT_EQ(job.status, JobStatus::ok);
            continue;
        }
        EXPECT_EQ(job.status, JobStatus::error);
        EXPECT_FALSE(job.error_message.empty());
        EXPECT_TRUE(job.metrics.empty());
    }
    EXPECT_NE(results[1].error_message.find("m=1000"), std::string::npos);
}

TEST(Workflow, BrokenDatasetOnlyAffectsItsRows) {
    testing_support::TempDir dir("wf");
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{
        std::make_shared<core::UcrLoader>(dir / "missing_10_12_13.txt"), synthetic(5)};
    const std::vector<preprocess::Preprocessor> pres{preprocess::Preprocessor::identity(),
                                                     preprocess::Preprocessor::z_normalize()};
    const std::vector<std::shared_ptr<const detect::Detector>> dets{std::make_shared<detect::HistogramDetector>()};
    const auto results = run_workflow(datasets, pres, dets, two_metrics());
    ASSERT_EQ(results.size(), 4u);
    EXPECT_EQ(results[0].status, JobStatus::error);
    EXPECT_EQ(results[1].status, JobStatus::error);
    EXPECT_EQ(results[0].dataset, "missing_10_12_13");
    EXPECT_EQ(results[2].status, JobStatus::ok);
    EXPECT_EQ(results[3].status, JobStatus::ok);
}

TEST(Workflow, UndefinedMetricIsWarnedAndRenderedNA) {
    core::SyntheticSpec spec;
    spec.n = 400;
    spec.period = 20;
    spec.anomaly_start = 300;
    spec.anomaly_len = 0;
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{std::make_shared<core::SyntheticLoader>(spec)};
    const auto results = run_workflow(datasets, {preprocess::Preprocessor::identity()},
                                      {std::make_shared<detect::HistogramDetector>()}, two_metrics());
    ASSERT_EQ(results[0].status, JobStatus::ok);
    EXPECT_FALSE(results[0].metrics[0].value.has_value());
    EXPECT_EQ(results[0].warnings.size(), 2u);
    const std::vector<std::string> names{"AucRoc", "AucPr"};
    const auto row = split(lines_of(results_csv(results, names))[1]);
    EXPECT_EQ(row[3], "NA");
    EXPECT_EQ(row[4], "NA");
}

TEST(Workflow, EmptyListsAreConfigErrors) {
    const std::vector<std::shared_ptr<const detect::Detector>> dets{std::make_shared<detect::HistogramDetector>()};
    EXPECT_THROW(run_workflow({}, {preprocess::Preprocessor::identity()}, dets, two_metrics()), ConfigError);
    EXPECT_THROW(run_workflow({synthetic(1)}, {}, dets, two_metrics()), ConfigError);
    EXPECT_THROW(run_workflow({synthetic(1)}, {preprocess::Preprocessor::identity()}, {}, two_metrics()), ConfigError);
    EXPECT_THROW(run_workflow({synthetic(1)}, {preprocess::Preprocessor::identity()}, dets, {}), ConfigError);
}

TEST(Workflow, ParallelMatchesSequentialWithoutMemory) {
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{synthetic(1), synthetic(2), synthetic(3)};
    const std::vector<preprocess::Preprocessor> pres{preprocess::Preprocessor::identity(),
                                                     preprocess::Preprocessor::min_max()};
    const std::vector<std::shared_ptr<const detect::Detector>> dets{
        std::make_shared<detect::KnnWindowsDetector>(WindowSize::fixed(25), 3), std::make_shared<ThrowingDetector>()};
    WorkflowOptions parallel;
    parallel.parallel = true;
    parallel.threads = 4;
    const auto seq = run_workflow(datasets, pres, dets, two_metrics());
    const auto par = run_workflow(datasets, pres, dets, two_metrics(), parallel);
    ASSERT_EQ(seq.size(), par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        EXPECT_EQ(seq[i].dataset, par[i].dataset);
        EXPECT_EQ(seq[i].detector, par[i].detector);
        EXPECT_EQ(seq[i].status, par[i].status);
        ASSERT_EQ(seq[i].metrics.size(), par[i].metrics.size());
        for (std::size_t k = 0; k < seq[i].metrics.size(); ++k) EXPECT_EQ(seq[i].metrics[k].value, par[i].metrics[k].value);
        EXPECT_FALSE(par[i].peak_memory_bytes.has_value());
        if (seq[i].status == JobStatus::ok) EXPECT_TRUE(seq[i].peak_memory_bytes.has_value());
    }
}

TEST(ResultsCsv, ShapeHeaderAndQuoting) {
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{synthetic(1)};
    const std::vector<preprocess::Preprocessor> pres{preprocess::Preprocessor::identity(),
                                                     preprocess::Preprocessor::z_normalize()};
    const std::vector<std::shared_ptr<const detect::Detector>> dets{std::make_shared<detect::HistogramDetector>(),
                                                                     std::make_shared<ThrowingDetector>()};
    const std::vector<std::string> names{"AucRoc", "AucPr"};
    const auto results = run_workflow(datasets, pres, dets, two_metrics());
    testing_support::TempDir dir("wf");
    write_results_csv(results, names, dir / "results.csv");
    const auto lines = testing_support::read_lines(dir / "results.csv");
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0], "dataset,preprocessor,detector,AucRoc,AucPr,fit_time_s,predict_time_s,peak_memory_bytes,status,error_message");
    for (const auto& line : lines) EXPECT_EQ(split(line).size(), 10u) << line;
    const auto err = split(lines[2]);
    EXPECT_EQ(err[2], "Throws, \"loudly\"");
    EXPECT_EQ(err[3], "");
    EXPECT_EQ(err[4], "");
    EXPECT_EQ(err[8], "error");
    EXPECT_NE(err[9].find("boom, with \"quotes\""), std::string::npos);
    EXPECT_EQ(split(lines[1])[8], "ok");
    EXPECT_THROW(write_results_csv({}, names, dir / "empty.csv"), ValidationError);
    EXPECT_THROW(write_results_csv(results, names, dir / "no" / "such" / "dir.csv"), IoError);
}

TEST(ResultsCsv, DeterministicApartFromMeasurements) {
    const std::vector<std::shared_ptr<core::DataLoader>> datasets{synthetic(1), synthetic(9)};
    const std::vector<preprocess::Preprocessor> pres{preprocess::Preprocessor::exp_smoothing(0.5)};
    const std::vector<std::shared_ptr<const detect::Detector>> dets{
        std::make_shared<detect::MatrixProfileDetector>(), std::make_shared<detect::MovingZScoreDetector>(),
        std::make_shared<ThrowingDetector>()};
    const std::vector<std::string> names{"AucRoc", "AucPr"};
    auto masked = [&] {
        std::string out;
        for (const auto& line : lines_of(results_csv(run_workflow(datasets, pres, dets, two_metrics()), names))) {
            auto cells = split(line);
            cells[5] = cells[6] = cells[7] = "";
            for (const auto& c : cells) out += c + "|";
            out += "\n";
        }
        return out;
    };
    EXPECT_EQ(masked(), masked());
}

TEST(Profiling, TimesAreNonNegative) {
    const auto m = measure_job([] {}, [] {});
    EXPECT_GE(m.fit_time_s, 0.0);
    EXPECT_GE(m.predict_time_s, 0.0);
}

TEST(Profiling, PlantedAllocationIsSeen) {
    ASSERT_TRUE(allocation_tracking_installed());
    for (auto source : {MemorySource::automatic, MemorySource::allocation_tracking}) {
        const auto m = measure_job(
            [] {
                std::vector<double> buffer(1'000'000, 2.0);
                volatile double keep = buffer[12345];
                (void)keep;
            },
            [] {}, source);
        ASSERT_TRUE(m.peak_memory_bytes.has_value());
        EXPECT_GE(*m.peak_memory_bytes, 8'000'000u);
        EXPECT_LT(*m.peak_memory_bytes, 9'000'000u);
    }
}

TEST(Profiling, ResidentSetFallback) {
    const auto m = measure_job(
        [] {
            std::vector<double> buffer(4'000'000, 3.0);
            volatile double keep = buffer[777];
            (void)keep;
        },
        [] {}, MemorySource::resident_set);
    if (!m.peak_memory_bytes) GTEST_SKIP() << "resident-set high-water mark unavailable here";
    EXPECT_GE(*m.peak_memory_bytes, 8'000'000u);
}

TEST(Profiling, NoSourceMeansAbsent) {
    const auto m = measure_job([] { std::vector<double> b(1000); }, [] {}, MemorySource::none);
    EXPECT_FALSE(m.peak_memory_bytes.has_value());
}

TEST(Profiling, WorkflowReportsPlantedAllocation) {
    const std::vector<std::shared_ptr<const detect::Detector>> dets{std::make_shared<AllocatingDetector>(1'000'000)};
    const auto results = run_workflow({synthetic(1)}, {preprocess::Preprocessor::identity()}, dets, two_metrics());
    ASSERT_EQ(results[0].status, JobStatus::ok) << results[0].error_message;
    ASSERT_TRUE(results[0].peak_memory_bytes.has_value());
    EXPECT_GE(*results[0].peak_memory_bytes, 8'000'000u);
}

TEST(Profiling, ExceptionsPropagateFromMeasure) {
    EXPECT_THROW(measure_job([] { throw ValidationError("x"); }, [] {}), ValidationError);
}
