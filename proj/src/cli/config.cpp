#include "tsad/cli/config.hpp"

#include <algorithm>
#include <fstream>

#include "tsad/error.hpp"

namespace tsad::cli {

namespace {

const Json& required_list(const Json& document, const char* key) {
    const auto it = document.find(key);
    if (it == document.end()) throw ConfigError(std::string(key) + ": missing required field");
    if (!it->is_array()) throw ConfigError(std::string(key) + ": expected an array");
    if (it->empty()) throw ConfigError(std::string(key) + ": must contain at least one entry");
    return *it;
}

std::string at(const char* key, std::size_t i) { return std::string(key) + "[" + std::to_string(i) + "]"; }

}  // namespace

BenchmarkConfig parse_benchmark_config(const Json& document, const std::filesystem::path& base_dir,
                                       const Registry& registry) {
    if (!document.is_object()) throw ConfigError("config: expected a JSON object at the top level");
    static const char* kSections[] = {"datasets", "preprocessors", "detectors", "metrics"};
    for (const auto& [key, _] : document.items()) {
        if (std::find(std::begin(kSections), std::end(kSections), key) == std::end(kSections)) {
            throw ConfigError(key + ": unknown top-level field");
        }
    }
    // Presence of every section is checked before any component is built.
    for (const char* section : kSections) required_list(document, section);

    BenchmarkConfig config;
    const auto& datasets = document.at("datasets");
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        config.datasets.push_back(registry.make_loader(datasets[i], at("datasets", i), base_dir));
    }
    const auto& preprocessors = document.at("preprocessors");
    for (std::size_t i = 0; i < preprocessors.size(); ++i) {
        config.preprocessors.push_back(registry.make_preprocessor(preprocessors[i], at("preprocessors", i)));
    }
    const auto& detectors = document.at("detectors");
    for (std::size_t i = 0; i < detectors.size(); ++i) {
        config.detectors.push_back(registry.make_detector(detectors[i], at("detectors", i)));
    }
    const auto& metrics = document.at("metrics");
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        config.metrics.push_back(registry.make_metric(metrics[i], at("metrics", i)));
    }
    return config;
}

BenchmarkConfig load_benchmark_config(const std::filesystem::path& path, const Registry& registry) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    Json document;
    try {
        document = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    return parse_benchmark_config(document, path.parent_path(), registry);
}

}  // namespace tsad::cli
