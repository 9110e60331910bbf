#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include "tsad/core/synthetic.hpp"
#include "tsad/core/time_series.hpp"

namespace tsad::core {

/// Lazy data source. Nothing is read until `load()`; with caching enabled the
/// first successful result is kept and returned by every later call. A failed
/// read is never cached, so the next call retries.
///
/// `load()` is safe to call from several threads. Reads are serialised, which
/// makes the at-most-once guarantee hold under races as well.
class DataLoader {
public:
    explicit DataLoader(bool cache_enabled = true) : cache_enabled_(cache_enabled) {}
    virtual ~DataLoader() = default;

    DataLoader(const DataLoader&) = delete;
    DataLoader& operator=(const DataLoader&) = delete;

    std::shared_ptr<const Dataset> load() const;

    /// Identifier usable before loading (e.g. a file stem).
    virtual std::string name() const = 0;

    bool cache_enabled() const noexcept { return cache_enabled_; }
    /// Number of times the underlying source was read.
    std::size_t read_count() const noexcept { return reads_.load(); }
    void clear_cache();

protected:
    virtual Dataset read() const = 0;

private:
    bool cache_enabled_;
    mutable std::mutex mutex_;
    mutable std::shared_ptr<const Dataset> cached_;
    mutable std::atomic<std::size_t> reads_{0};
};

class UcrLoader final : public DataLoader {
public:
    explicit UcrLoader(std::filesystem::path path, bool cache_enabled = true);

    std::string name() const override;
    const std::filesystem::path& path() const noexcept { return path_; }

protected:
    Dataset read() const override;

private:
    std::filesystem::path path_;
};

class SyntheticLoader final : public DataLoader {
public:
    explicit SyntheticLoader(SyntheticSpec spec, bool cache_enabled = true);

    std::string name() const override;

protected:
    Dataset read() const override;

private:
    SyntheticSpec spec_;
};

}  // namespace tsad::core
