#include "tsad/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tsad/cli/config.hpp"
#include "tsad/confidence/confidence.hpp"
#include "tsad/core/format.hpp"
#include "tsad/core/synthetic.hpp"
#include "tsad/core/ucr.hpp"
#include "tsad/error.hpp"
#include "tsad/viz/plot.hpp"
#include "tsad/workflow/workflow.hpp"

namespace tsad::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr const char* kDefaultDetector = R"({"kind":"MatrixProfile","params":{"window_size":"fft"}})";

struct DetectOptions {
    std::string data;
    std::string detector = kDefaultDetector;
    std::string output = "scores.csv";
    std::string plot;
    std::string plot_data;
    std::optional<double> confidence;
};

struct BenchmarkOptions {
    std::string config;
    std::string out_dir = ".";
    bool parallel = false;
};

struct PlotOptions {
    std::string data;
    std::string scores;
    std::string output = "plot.svg";
};

struct GenerateOptions {
    std::string out_dir = ".";
    core::SyntheticSpec spec;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

// A bare kind name or a component object in JSON.
Json detector_document(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw ConfigError(std::string("--detector: invalid JSON: ") + e.what());
        }
    }
    return Json{{"kind", text}, {"params", Json::object()}};
}

int cmd_detect(const DetectOptions& opt, std::ostream& out) {
    const auto detector = Registry::instance().make_detector(detector_document(opt.detector), "detector");
    if (opt.confidence && !(*opt.confidence > 0.0 && *opt.confidence < 1.0)) {
        throw ConfigError("--confidence: contamination must lie in (0, 1)");
    }

    const auto data = core::load_ucr(opt.data);
    auto model = detector->clone();

    auto start = Clock::now();
    model->fit(data.x_train);
    const double fit_time = seconds_since(start);
    start = Clock::now();
    const auto scores = model->decision_function(data.x_test);
    const double predict_time = seconds_since(start);

    std::optional<confidence::ConfidenceScores> conf;
    if (opt.confidence) {
        conf = confidence::exceed_confidence(model->reference_scores(data.x_train), scores, *opt.confidence);
    }

    std::string csv = conf ? "index,score,confidence\n" : "index,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        csv += std::to_string(i) + "," + core::format_real(scores[i]);
        if (conf) csv += "," + core::format_real(conf->confidence[i]);
        csv += "\n";
    }
    write_file(opt.output, csv);
    if (!opt.plot.empty()) viz::plot_anomaly_scores(data, scores, opt.plot);
    if (!opt.plot_data.empty()) viz::export_plot_data(data, scores, opt.plot_data);

    out << "dataset: " << data.name << " (train " << data.x_train.size() << ", test "
        << data.x_test.size() << ")\n";
    out << "detector: " << model->descriptor() << "\n";
    out << "fit_time_s: " << core::format_real(fit_time) << "\n";
    out << "predict_time_s: " << core::format_real(predict_time) << "\n";
    out << "scores: " << opt.output << "\n";
    return kExitOk;
}

int cmd_benchmark(const BenchmarkOptions& opt, std::ostream& out) {
    const auto config = load_benchmark_config(opt.config);
    workflow::WorkflowOptions options;
    options.parallel = opt.parallel;
    const workflow::Workflow grid(config.datasets, config.preprocessors, config.detectors, config.metrics,
                                  options);
    const auto names = grid.metric_names();

    fs::create_directories(opt.out_dir);
    const auto results = grid.run();
    const fs::path csv_path = fs::path(opt.out_dir) / "results.csv";
    workflow::write_results_csv(results, names, csv_path);

    for (const auto& job : results) {
        out << (job.status == workflow::JobStatus::ok ? "[ok]    " : "[error] ") << job.dataset << " | "
            << job.preprocessor << " | " << job.detector;
        if (job.status == workflow::JobStatus::ok) {
            const auto& key = job.metrics.front();
            out << " | " << key.name << "=" << (key.value ? core::format_real(*key.value) : "NA");
            for (const auto& warning : job.warnings) out << " (warning: " << warning << ")";
        } else {
            out << " | " << job.error_message;
        }
        out << "\n";
    }
    out << "results: " << csv_path.string() << "\n";
    return kExitOk;
}

std::vector<double> read_score_column(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty score file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
    const auto column = std::find(header.begin(), header.end(), "score");
    if (column == header.end()) throw ParseError(path.string() + ": header has no 'score' column");
    const auto index = static_cast<std::size_t>(column - header.begin());

    std::vector<double> scores;
    for (std::size_t number = 2; std::getline(in, line); ++number) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');) cells.push_back(cell);
        if (cells.size() <= index) {
            throw ParseError(path.string() + ": line " + std::to_string(number) + " has no score field");
        }
        std::istringstream value(cells[index]);
        double v = 0.0;
        if (!(value >> v) || !(value >> std::ws).eof()) {
            throw ParseError(path.string() + ": line " + std::to_string(number) + ": '" + cells[index] +
                             "' is not a number");
        }
        scores.push_back(v);
    }
    return scores;
}

int cmd_plot(const PlotOptions& opt, std::ostream& out) {
    const auto data = core::load_ucr(opt.data);
    const auto scores = read_score_column(opt.scores);
    viz::plot_anomaly_scores(data, scores, opt.output);
    out << "plot: " << opt.output << "\n";
    return kExitOk;
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
    fs::create_directories(opt.out_dir);
    const auto path = core::write_ucr(core::make_synthetic(opt.spec), opt.out_dir);
    out << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time series anomaly detection: detection runs, grid benchmarks and score plots", "tsad"};
    app.require_subcommand(1);

    DetectOptions detect;
    auto* detect_cmd = app.add_subcommand("detect", "Fit on the training part of a UCR file and score its test part");
    detect_cmd->add_option("data", detect.data, "UCR-format data file")->required();
    detect_cmd->add_option("-d,--detector", detect.detector,
                           "Detector kind or JSON component object (default: MatrixProfile with fft window)");
    detect_cmd->add_option("-o,--output", detect.output, "Score CSV to write")->capture_default_str();
    detect_cmd->add_option("--plot", detect.plot, "Also write an SVG plot of the scores");
    detect_cmd->add_option("--plot-data", detect.plot_data, "Also write the plot data as CSV");
    detect_cmd->add_option("--confidence", detect.confidence,
                           "Contamination rate in (0,1); adds a confidence column");

    BenchmarkOptions bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "Run a grid benchmark described by a JSON config");
    bench_cmd->add_option("config", bench.config, "Benchmark config file")->required();
    bench_cmd->add_option("-o,--out-dir", bench.out_dir, "Directory for results.csv")->capture_default_str();
    bench_cmd->add_flag("--parallel", bench.parallel, "Run jobs concurrently (peak memory is not reported)");

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "Plot a score CSV against its UCR data file");
    plot_cmd->add_option("data", plot.data, "UCR-format data file")->required();
    plot_cmd->add_option("scores", plot.scores, "CSV with a 'score' column, one row per test point")->required();
    plot_cmd->add_option("-o,--output", plot.output, "SVG file to write")->capture_default_str();

    GenerateOptions gen;
    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic series with one anomaly in UCR format");
    gen_cmd->add_option("-o,--out-dir", gen.out_dir, "Output directory")->capture_default_str();
    gen_cmd->add_option("--n", gen.spec.n, "Series length")->capture_default_str();
    gen_cmd->add_option("--period", gen.spec.period, "Sine period")->capture_default_str();
    gen_cmd->add_option("--anomaly-start", gen.spec.anomaly_start, "Anomaly start (global index)")
        ->capture_default_str();
    gen_cmd->add_option("--anomaly-len", gen.spec.anomaly_len, "Anomaly length")->capture_default_str();
    gen_cmd->add_option("--noise", gen.spec.noise_sd, "Gaussian noise sd")->capture_default_str();
    gen_cmd->add_option("--seed", gen.spec.seed, "Random seed")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (detect_cmd->parsed()) return cmd_detect(detect, out);
        if (bench_cmd->parsed()) return cmd_benchmark(bench, out);
        if (plot_cmd->parsed()) return cmd_plot(plot, out);
        if (gen_cmd->parsed()) return cmd_generate(gen, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace tsad::cli
