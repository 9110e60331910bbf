#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

namespace tsad::workflow {

// Process-wide allocation counters fed by the replaced global operator
// new/delete in the `tsad_alloc_hooks` object library. Without those hooks
// linked in, `allocation_tracking_installed()` is false.
namespace alloc {
void mark_installed() noexcept;
void record_allocation(std::size_t bytes) noexcept;
void record_deallocation(std::size_t bytes) noexcept;
}  // namespace alloc

bool allocation_tracking_installed() noexcept;
std::int64_t allocated_bytes() noexcept;

enum class MemorySource {
    automatic,  // allocation tracking, else resident-set high-water mark, else none
    allocation_tracking,
    resident_set,
    none,
};

/// Measures the peak memory used between construction and `finish()`.
/// Allocation tracking reports the high-water mark of live heap bytes above
/// the level at construction; the resident-set source reports the rise of the
/// process high-water mark. Only one probe should be active at a time.
class PeakMemoryProbe {
public:
    explicit PeakMemoryProbe(MemorySource source = MemorySource::automatic);

    /// Empty when no measurement source is available.
    std::optional<std::size_t> finish();

    MemorySource source() const noexcept { return source_; }

private:
    MemorySource source_;
    std::int64_t baseline_ = 0;
};

struct JobMeasurement {
    double fit_time_s = 0.0;
    double predict_time_s = 0.0;
    std::optional<std::size_t> peak_memory_bytes;
};

// Times `fit` and `predict` separately on a monotonic clock and records peak
// memory across both. Exceptions from either step propagate.
JobMeasurement measure_job(const std::function<void()>& fit, const std::function<void()>& predict,
                           MemorySource source = MemorySource::automatic);

}  // namespace tsad::workflow
