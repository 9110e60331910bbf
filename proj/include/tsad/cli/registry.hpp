#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsad/core/loader.hpp"
#include "tsad/detect/detector.hpp"
#include "tsad/eval/metrics.hpp"
#include "tsad/eval/thresholding.hpp"
#include "tsad/preprocess/preprocessor.hpp"

namespace tsad::cli {

using Json = nlohmann::json;

/// Typed, path-aware access to the `params` object of one component. Every
/// error names the offending location, e.g. `detectors[1].window_size`.
/// `finish()` rejects keys that no getter asked for.
class Params {
public:
    Params(const Json& params, std::string path, std::filesystem::path base_dir = {});

    std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt);
    double real(const std::string& key, std::optional<double> fallback = std::nullopt);
    bool flag(const std::string& key, std::optional<bool> fallback = std::nullopt);
    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
    std::filesystem::path file(const std::string& key);
    detect::WindowSize window(const std::string& key);
    const Json& object(const std::string& key);

    std::string location(const std::string& key) const;
    const std::string& path() const noexcept { return path_; }
    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

    void finish() const;

private:
    const Json* find(const std::string& key);

    const Json& params_;
    std::string path_;
    std::filesystem::path base_dir_;
    std::set<std::string> used_;
};

template <class T>
using Factory = std::function<T(Params&)>;

/// String registry mapping component kinds to constructors, one table per
/// category. The built-in kinds are registered on construction; new kinds
/// can be added at any time before configs are parsed.
class Registry {
public:
    Registry();
    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;

    static Registry& instance();

    void add_loader(const std::string& kind, Factory<std::shared_ptr<core::DataLoader>> factory);
    void add_preprocessor(const std::string& kind, Factory<preprocess::Preprocessor> factory);
    void add_detector(const std::string& kind, Factory<std::shared_ptr<const detect::Detector>> factory);
    void add_metric(const std::string& kind, Factory<std::shared_ptr<const eval::Metric>> factory);
    void add_thresholder(const std::string& kind, Factory<eval::Thresholder> factory);

    // `config` is a component object {"kind": ..., "params": {...}}; `path`
    // locates it inside the document for error messages.
    std::shared_ptr<core::DataLoader> make_loader(const Json& config, const std::string& path,
                                                  const std::filesystem::path& base_dir = {}) const;
    preprocess::Preprocessor make_preprocessor(const Json& config, const std::string& path) const;
    std::shared_ptr<const detect::Detector> make_detector(const Json& config, const std::string& path) const;
    std::shared_ptr<const eval::Metric> make_metric(const Json& config, const std::string& path) const;
    eval::Thresholder make_thresholder(const Json& config, const std::string& path) const;

    std::vector<std::string> loader_kinds() const;
    std::vector<std::string> preprocessor_kinds() const;
    std::vector<std::string> detector_kinds() const;
    std::vector<std::string> metric_kinds() const;
    std::vector<std::string> thresholder_kinds() const;

private:
    std::map<std::string, Factory<std::shared_ptr<core::DataLoader>>> loaders_;
    std::map<std::string, Factory<preprocess::Preprocessor>> preprocessors_;
    std::map<std::string, Factory<std::shared_ptr<const detect::Detector>>> detectors_;
    std::map<std::string, Factory<std::shared_ptr<const eval::Metric>>> metrics_;
    std::map<std::string, Factory<eval::Thresholder>> thresholders_;
};

}  // namespace tsad::cli
