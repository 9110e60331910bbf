#include "tsad/core/time_series.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tsad/error.hpp"

namespace tsad::core {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ValidationError("time series must contain at least one value");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError("time series value at index " + std::to_string(i) +
                                  " is not finite");
        }
    }
}

Dataset::Dataset(std::string name_, TimeSeries x_train_, TimeSeries x_test_, Labels y_test_)
    : name(std::move(name_)),
      x_train(std::move(x_train_)),
      x_test(std::move(x_test_)),
      y_test(std::move(y_test_)) {
    if (y_test.size() != x_test.size()) {
        throw ValidationError("label count " + std::to_string(y_test.size()) +
                              " does not match test length " + std::to_string(x_test.size()));
    }
    for (std::size_t i = 0; i < y_test.size(); ++i) {
        if (y_test[i] > 1) {
            throw ValidationError("label at index " + std::to_string(i) + " is not 0 or 1");
        }
    }
}

std::size_t Dataset::anomaly_count() const noexcept {
    return std::accumulate(y_test.begin(), y_test.end(), std::size_t{0});
}

}  // namespace tsad::core
