#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsad::core {

using Label = std::uint8_t;
using Labels = std::vector<Label>;

// Finite, non-empty, univariate real-valued sequence. Immutable once built.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool operator==(const TimeSeries&) const = default;

private:
    std::vector<double> values_;
};

// Named train/test split with point-wise ground truth on the test part.
struct Dataset {
    Dataset(std::string name, TimeSeries x_train, TimeSeries x_test, Labels y_test);

    std::string name;
    TimeSeries x_train;
    TimeSeries x_test;
    Labels y_test;

    std::size_t anomaly_count() const noexcept;

    bool operator==(const Dataset&) const = default;
};

}  // namespace tsad::core
