#include "tsad/core/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "tsad/error.hpp"

namespace tsad::core {

Dataset make_synthetic(const SyntheticSpec& spec) {
    if (spec.n < 2) throw ParameterError("synthetic series needs n >= 2");
    if (spec.period == 0 || spec.period >= spec.n) {
        throw ParameterError("synthetic period must satisfy 0 < period < n");
    }
    if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.noise_sd)) {
        throw ParameterError("synthetic noise_sd must be a finite value >= 0");
    }
    const std::size_t train_len = spec.n / 2;
    if (spec.anomaly_start < train_len || spec.anomaly_start > spec.n ||
        spec.anomaly_len > spec.n - spec.anomaly_start) {
        throw ValidationError("synthetic anomaly window [" + std::to_string(spec.anomaly_start) +
                              ", " + std::to_string(spec.anomaly_start + spec.anomaly_len) +
                              ") is outside the test half [" + std::to_string(train_len) + ", " +
                              std::to_string(spec.n) + ")");
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double omega = 2.0 * std::numbers::pi / static_cast<double>(spec.period);

    std::vector<double> values(spec.n);
    for (std::size_t t = 0; t < spec.n; ++t) {
        const bool in_anomaly = t >= spec.anomaly_start && t < spec.anomaly_start + spec.anomaly_len;
        if (in_anomaly) {
            values[t] = kSyntheticAnomalyNoiseSd * gauss(rng);
        } else {
            values[t] = std::sin(omega * static_cast<double>(t));
            if (spec.noise_sd > 0.0) values[t] += spec.noise_sd * gauss(rng);
        }
    }

    Labels labels(spec.n - train_len, 0);
    for (std::size_t t = spec.anomaly_start; t < spec.anomaly_start + spec.anomaly_len; ++t) {
        labels[t - train_len] = 1;
    }
    std::vector<double> train(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(train_len));
    std::vector<double> test(values.begin() + static_cast<std::ptrdiff_t>(train_len), values.end());
    return Dataset("synthetic_" + std::to_string(spec.seed), TimeSeries(std::move(train)),
                   TimeSeries(std::move(test)), std::move(labels));
}

}  // namespace tsad::core
