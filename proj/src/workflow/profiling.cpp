#include "tsad/workflow/profiling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

namespace tsad::workflow {

namespace {

constinit std::atomic<bool> g_installed{false};
constinit std::atomic<std::int64_t> g_current{0};
constinit std::atomic<std::int64_t> g_peak{0};

// VmHWM / VmRSS from /proc/self/status, in bytes.
std::optional<std::int64_t> read_status_kb(const std::string& key) {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + ":", 0) == 0) {
            std::istringstream fields(line.substr(key.size() + 1));
            std::int64_t kb = 0;
            if (fields >> kb) return kb * 1024;
        }
    }
    return std::nullopt;
}

bool reset_resident_high_water_mark() {
    std::ofstream out("/proc/self/clear_refs");
    if (!out) return false;
    out << "5";
    out.flush();
    return static_cast<bool>(out);
}

MemorySource resolve(MemorySource requested) {
    if (requested != MemorySource::automatic) return requested;
    if (allocation_tracking_installed()) return MemorySource::allocation_tracking;
    if (read_status_kb("VmHWM")) return MemorySource::resident_set;
    return MemorySource::none;
}

}  // namespace

namespace alloc {

void mark_installed() noexcept { g_installed.store(true, std::memory_order_relaxed); }

void record_allocation(std::size_t bytes) noexcept {
    const auto now = g_current.fetch_add(static_cast<std::int64_t>(bytes), std::memory_order_relaxed) +
                     static_cast<std::int64_t>(bytes);
    auto peak = g_peak.load(std::memory_order_relaxed);
    while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
    }
}

void record_deallocation(std::size_t bytes) noexcept {
    g_current.fetch_sub(static_cast<std::int64_t>(bytes), std::memory_order_relaxed);
}

}  // namespace alloc

bool allocation_tracking_installed() noexcept { return g_installed.load(std::memory_order_relaxed); }

std::int64_t allocated_bytes() noexcept { return g_current.load(std::memory_order_relaxed); }

PeakMemoryProbe::PeakMemoryProbe(MemorySource source) : source_(resolve(source)) {
    switch (source_) {
        case MemorySource::allocation_tracking:
            if (!allocation_tracking_installed()) {
                source_ = MemorySource::none;
                break;
            }
            baseline_ = g_current.load(std::memory_order_relaxed);
            g_peak.store(baseline_, std::memory_order_relaxed);
            break;
        case MemorySource::resident_set: {
            const auto rss = read_status_kb("VmRSS");
            if (!rss || !reset_resident_high_water_mark()) {
                source_ = MemorySource::none;
                break;
            }
            baseline_ = *rss;
            break;
        }
        default:
            source_ = MemorySource::none;
            break;
    }
}

std::optional<std::size_t> PeakMemoryProbe::finish() {
    switch (source_) {
        case MemorySource::allocation_tracking: {
            const auto peak = g_peak.load(std::memory_order_relaxed);
            return static_cast<std::size_t>(std::max<std::int64_t>(0, peak - baseline_));
        }
        case MemorySource::resident_set: {
            const auto hwm = read_status_kb("VmHWM");
            if (!hwm) return std::nullopt;
            return static_cast<std::size_t>(std::max<std::int64_t>(0, *hwm - baseline_));
        }
        default:
            return std::nullopt;
    }
}

JobMeasurement measure_job(const std::function<void()>& fit, const std::function<void()>& predict,
                           MemorySource source) {
    using Clock = std::chrono::steady_clock;
    JobMeasurement m;
    PeakMemoryProbe probe(source);
    const auto t0 = Clock::now();
    fit();
    const auto t1 = Clock::now();
    predict();
    const auto t2 = Clock::now();
    m.peak_memory_bytes = probe.finish();
    m.fit_time_s = std::chrono::duration<double>(t1 - t0).count();
    m.predict_time_s = std::chrono::duration<double>(t2 - t1).count();
    return m;
}

}  // namespace tsad::workflow
