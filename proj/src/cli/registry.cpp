#include "tsad/cli/registry.hpp"

#include <cmath>
#include <limits>

#include "tsad/detect/baselines.hpp"
#include "tsad/detect/matrix_profile.hpp"
#include "tsad/error.hpp"

namespace tsad::cli {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) out += (out.empty() ? "" : ", ") + item;
    return out;
}

template <class Map>
std::vector<std::string> keys_of(const Map& map) {
    std::vector<std::string> keys;
    for (const auto& [key, _] : map) keys.push_back(key);
    return keys;
}

template <class Map>
auto build(const Map& table, const char* category, const Json& config, const std::string& path,
           const std::filesystem::path& base_dir = {}) {
    if (!config.is_object()) throw ConfigError(path + ": expected an object with a \"kind\" field");
    const auto kind_it = config.find("kind");
    if (kind_it == config.end()) throw ConfigError(path + ".kind: missing required field");
    if (!kind_it->is_string()) throw ConfigError(path + ".kind: expected a string");
    const auto kind = kind_it->template get<std::string>();
    for (const auto& [key, _] : config.items()) {
        if (key != "kind" && key != "params") throw ConfigError(path + "." + key + ": unknown field");
    }

    const auto entry = table.find(kind);
    if (entry == table.end()) {
        throw ConfigError(path + ".kind: unknown " + category + " kind \"" + kind +
                          "\"; valid kinds: " + join(keys_of(table)));
    }

    static const Json kEmpty = Json::object();
    const auto params_it = config.find("params");
    if (params_it != config.end() && !params_it->is_object()) {
        throw ConfigError(path + ".params: expected an object");
    }
    Params params(params_it != config.end() ? *params_it : kEmpty, path, base_dir);
    try {
        auto component = entry->second(params);
        params.finish();
        return component;
    } catch (const ConfigError&) {
        throw;
    } catch (const ParameterError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

Params::Params(const Json& params, std::string path, std::filesystem::path base_dir)
    : params_(params), path_(std::move(path)), base_dir_(std::move(base_dir)) {}

std::string Params::location(const std::string& key) const { return path_ + "." + key; }

const Json* Params::find(const std::string& key) {
    used_.insert(key);
    const auto it = params_.find(key);
    return it == params_.end() ? nullptr : &*it;
}

std::size_t Params::count(const std::string& key, std::optional<std::size_t> fallback) {
    const Json* v = find(key);
    if (v == nullptr) {
        if (fallback) return *fallback;
        throw ConfigError(location(key) + ": missing required parameter");
    }
    if (!v->is_number_integer() || v->get<long long>() < 0) {
        throw ConfigError(location(key) + ": expected a non-negative integer, got " + v->dump());
    }
    return v->get<std::size_t>();
}

double Params::real(const std::string& key, std::optional<double> fallback) {
    const Json* v = find(key);
    if (v == nullptr) {
        if (fallback) return *fallback;
        throw ConfigError(location(key) + ": missing required parameter");
    }
    if (!v->is_number()) throw ConfigError(location(key) + ": expected a number, got " + v->dump());
    return v->get<double>();
}

bool Params::flag(const std::string& key, std::optional<bool> fallback) {
    const Json* v = find(key);
    if (v == nullptr) {
        if (fallback) return *fallback;
        throw ConfigError(location(key) + ": missing required parameter");
    }
    if (!v->is_boolean()) throw ConfigError(location(key) + ": expected true or false, got " + v->dump());
    return v->get<bool>();
}

std::string Params::text(const std::string& key, std::optional<std::string> fallback) {
    const Json* v = find(key);
    if (v == nullptr) {
        if (fallback) return *fallback;
        throw ConfigError(location(key) + ": missing required parameter");
    }
    if (!v->is_string()) throw ConfigError(location(key) + ": expected a string, got " + v->dump());
    return v->get<std::string>();
}

std::filesystem::path Params::file(const std::string& key) {
    std::filesystem::path p = text(key);
    if (p.empty()) throw ConfigError(location(key) + ": path must not be empty");
    if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
    return p;
}

detect::WindowSize Params::window(const std::string& key) {
    const Json* v = find(key);
    if (v == nullptr) return detect::WindowSize::fft();
    if (v->is_string() && v->get<std::string>() == "fft") return detect::WindowSize::fft();
    if (v->is_number_integer() && v->get<long long>() >= 2) {
        return detect::WindowSize::fixed(v->get<std::size_t>());
    }
    throw ConfigError(location(key) + ": expected \"fft\" or an integer >= 2, got " + v->dump());
}

const Json& Params::object(const std::string& key) {
    const Json* v = find(key);
    if (v == nullptr) throw ConfigError(location(key) + ": missing required parameter");
    return *v;
}

void Params::finish() const {
    for (const auto& [key, _] : params_.items()) {
        if (!used_.contains(key)) throw ConfigError(location(key) + ": unknown parameter");
    }
}

Registry::Registry() {
    add_loader("UCRLoader", [](Params& p) -> std::shared_ptr<core::DataLoader> {
        const auto path = p.file("path");
        const bool cache = p.flag("cache", true);
        return std::make_shared<core::UcrLoader>(path, cache);
    });
    add_loader("Synthetic", [](Params& p) -> std::shared_ptr<core::DataLoader> {
        core::SyntheticSpec spec;
        spec.n = p.count("n", spec.n);
        spec.period = p.count("period", spec.period);
        spec.anomaly_start = p.count("anomaly_start", spec.anomaly_start);
        spec.anomaly_len = p.count("anomaly_len", spec.anomaly_len);
        spec.noise_sd = p.real("noise_sd", spec.noise_sd);
        spec.seed = p.count("seed", 0);
        return std::make_shared<core::SyntheticLoader>(spec, p.flag("cache", true));
    });

    using preprocess::Preprocessor;
    add_preprocessor("Identity", [](Params&) { return Preprocessor::identity(); });
    add_preprocessor("ZNormalize", [](Params&) { return Preprocessor::z_normalize(); });
    add_preprocessor("MinMax", [](Params&) { return Preprocessor::min_max(); });
    add_preprocessor("MovingAverage", [](Params& p) { return Preprocessor::moving_average(p.count("window")); });
    add_preprocessor("ExpSmoothing", [](Params& p) { return Preprocessor::exp_smoothing(p.real("alpha")); });
    add_preprocessor("Undersample", [](Params& p) { return Preprocessor::undersample(p.count("n_samples")); });
    add_preprocessor("Chain", [this](Params& p) {
        const Json& steps = p.object("steps");
        if (!steps.is_array() || steps.empty()) {
            throw ConfigError(p.location("steps") + ": expected a non-empty array of preprocessors");
        }
        std::vector<Preprocessor> stages;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            stages.push_back(make_preprocessor(steps[i], p.location("steps") + "[" + std::to_string(i) + "]"));
        }
        return Preprocessor::chain(stages);
    });

    add_detector("MatrixProfile", [](Params& p) -> std::shared_ptr<const detect::Detector> {
        detect::MatrixProfileOptions options;
        const auto window = p.window("window_size");
        options.self_join = p.flag("self_join", false);
        return std::make_shared<detect::MatrixProfileDetector>(window, options);
    });
    add_detector("KNNWindows", [](Params& p) -> std::shared_ptr<const detect::Detector> {
        const auto window = p.window("window_size");
        const auto k = p.count("k", detect::KnnWindowsDetector::kDefaultNeighbors);
        if (k < 1) throw ConfigError(p.location("k") + ": must be >= 1");
        return std::make_shared<detect::KnnWindowsDetector>(window, k);
    });
    add_detector("Histogram", [](Params& p) -> std::shared_ptr<const detect::Detector> {
        const auto bins = p.count("bins", detect::HistogramDetector::kDefaultBins);
        if (bins < 1) throw ConfigError(p.location("bins") + ": must be >= 1");
        return std::make_shared<detect::HistogramDetector>(bins);
    });
    add_detector("MovingZScore", [](Params& p) -> std::shared_ptr<const detect::Detector> {
        return std::make_shared<detect::MovingZScoreDetector>(p.window("window_size"));
    });

    add_metric("AucRoc", [](Params&) -> std::shared_ptr<const eval::Metric> {
        return std::make_shared<eval::AucRocMetric>();
    });
    add_metric("AucPr", [](Params&) -> std::shared_ptr<const eval::Metric> {
        return std::make_shared<eval::AucPrMetric>();
    });
    const std::pair<const char*, eval::ThresholdMetric::Kind> binary[] = {
        {"Precision", eval::ThresholdMetric::Kind::precision},
        {"Recall", eval::ThresholdMetric::Kind::recall},
        {"F1", eval::ThresholdMetric::Kind::f1},
    };
    for (const auto& [name, kind] : binary) {
        add_metric(name, [this, kind = kind](Params& p) -> std::shared_ptr<const eval::Metric> {
            auto thresholder = make_thresholder(p.object("thresholding"), p.location("thresholding"));
            return std::make_shared<eval::ThresholdMetric>(kind, std::move(thresholder));
        });
    }

    add_thresholder("FixedCutoff", [](Params& p) { return eval::Thresholder::fixed_cutoff(p.real("cutoff")); });
    add_thresholder("ContaminationRate", [](Params& p) {
        const double rate = p.real("rate");
        if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError(p.location("rate") + ": must lie in [0, 1]");
        return eval::Thresholder::contamination_rate(rate);
    });
    add_thresholder("TopN", [](Params& p) { return eval::Thresholder::top_n(p.count("n")); });
}

Registry& Registry::instance() {
    static Registry registry;
    return registry;
}

void Registry::add_loader(const std::string& kind, Factory<std::shared_ptr<core::DataLoader>> factory) {
    loaders_[kind] = std::move(factory);
}
void Registry::add_preprocessor(const std::string& kind, Factory<preprocess::Preprocessor> factory) {
    preprocessors_[kind] = std::move(factory);
}
void Registry::add_detector(const std::string& kind, Factory<std::shared_ptr<const detect::Detector>> factory) {
    detectors_[kind] = std::move(factory);
}
void Registry::add_metric(const std::string& kind, Factory<std::shared_ptr<const eval::Metric>> factory) {
    metrics_[kind] = std::move(factory);
}
void Registry::add_thresholder(const std::string& kind, Factory<eval::Thresholder> factory) {
    thresholders_[kind] = std::move(factory);
}

std::shared_ptr<core::DataLoader> Registry::make_loader(const Json& config, const std::string& path,
                                                        const std::filesystem::path& base_dir) const {
    return build(loaders_, "dataset", config, path, base_dir);
}
preprocess::Preprocessor Registry::make_preprocessor(const Json& config, const std::string& path) const {
    return build(preprocessors_, "preprocessor", config, path);
}
std::shared_ptr<const detect::Detector> Registry::make_detector(const Json& config, const std::string& path) const {
    return build(detectors_, "detector", config, path);
}
std::shared_ptr<const eval::Metric> Registry::make_metric(const Json& config, const std::string& path) const {
    return build(metrics_, "metric", config, path);
}
eval::Thresholder Registry::make_thresholder(const Json& config, const std::string& path) const {
    return build(thresholders_, "thresholding", config, path);
}

std::vector<std::string> Registry::loader_kinds() const { return keys_of(loaders_); }
std::vector<std::string> Registry::preprocessor_kinds() const { return keys_of(preprocessors_); }
std::vector<std::string> Registry::detector_kinds() const { return keys_of(detectors_); }
std::vector<std::string> Registry::metric_kinds() const { return keys_of(metrics_); }
std::vector<std::string> Registry::thresholder_kinds() const { return keys_of(thresholders_); }

}  // namespace tsad::cli
