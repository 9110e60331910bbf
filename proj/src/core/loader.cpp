#include "tsad/core/loader.hpp"

#include "tsad/core/ucr.hpp"

namespace tsad::core {

std::shared_ptr<const Dataset> DataLoader::load() const {
    std::lock_guard lock(mutex_);
    if (cached_) return cached_;
    ++reads_;
    auto dataset = std::make_shared<const Dataset>(read());
    if (cache_enabled_) cached_ = dataset;
    return dataset;
}

void DataLoader::clear_cache() {
    std::lock_guard lock(mutex_);
    cached_.reset();
}

UcrLoader::UcrLoader(std::filesystem::path path, bool cache_enabled)
    : DataLoader(cache_enabled), path_(std::move(path)) {}

std::string UcrLoader::name() const { return path_.stem().string(); }

Dataset UcrLoader::read() const { return load_ucr(path_); }

SyntheticLoader::SyntheticLoader(SyntheticSpec spec, bool cache_enabled)
    : DataLoader(cache_enabled), spec_(spec) {}

std::string SyntheticLoader::name() const { return "synthetic_" + std::to_string(spec_.seed); }

Dataset SyntheticLoader::read() const { return make_synthetic(spec_); }

}  // namespace tsad::core
