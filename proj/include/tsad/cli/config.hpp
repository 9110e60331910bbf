#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tsad/cli/registry.hpp"
#include "tsad/workflow/workflow.hpp"

namespace tsad::cli {

// Fully validated benchmark grid, ready to run.
struct BenchmarkConfig {
    std::vector<std::shared_ptr<core::DataLoader>> datasets;
    std::vector<preprocess::Preprocessor> preprocessors;
    std::vector<std::shared_ptr<const detect::Detector>> detectors;
    std::vector<std::shared_ptr<const eval::Metric>> metrics;
};

/// Builds every component of a benchmark document
/// `{"datasets": [...], "preprocessors": [...], "detectors": [...], "metrics": [...]}`.
/// Relative dataset paths resolve against `base_dir`. Throws ConfigError on
/// the first problem found; nothing is loaded or run here.
BenchmarkConfig parse_benchmark_config(const Json& document, const std::filesystem::path& base_dir,
                                       const Registry& registry = Registry::instance());

BenchmarkConfig load_benchmark_config(const std::filesystem::path& path,
                                      const Registry& registry = Registry::instance());

}  // namespace tsad::cli
