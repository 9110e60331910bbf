#pragma once

#include <cstddef>
#include <cstdint>

#include "tsad/core/time_series.hpp"

namespace tsad::core {

struct SyntheticSpec {
    std::size_t n = 2000;
    std::size_t period = 50;
    std::size_t anomaly_start = 1500;  // global index into the full series
    std::size_t anomaly_len = 100;
    double noise_sd = 0.05;
    std::uint64_t seed = 0;
};

// Standard deviation of the near-constant noise written over the anomaly window.
inline constexpr double kSyntheticAnomalyNoiseSd = 1e-3;

// Unit sine of the given period plus Gaussian noise, with the anomaly window
// replaced by a near-constant low-amplitude noise segment. The first floor(n/2)
// values form the training part. Deterministic for a fixed seed.
Dataset make_synthetic(const SyntheticSpec& spec);

}  // namespace tsad::core
