#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "tsad/core/time_series.hpp"

namespace tsad::eval {

using core::Labels;

// ceil(fraction * n), robust to representation error in `fraction`
// (0.1 * 30 is 3, not 4).
std::size_t ceil_fraction(double fraction, std::size_t n);

/// Converts continuous scores to binary labels. Rank-based kinds flag the
/// highest scores, preferring the earlier index among equal scores.
class Thresholder {
public:
    static Thresholder fixed_cutoff(double cutoff);
    static Thresholder contamination_rate(double rate);
    static Thresholder top_n(std::size_t n);

    Labels apply(std::span<const double> scores) const;
    std::string descriptor() const;

private:
    struct FixedCutoff {
        double cutoff;
    };
    struct ContaminationRate {
        double rate;
    };
    struct TopN {
        std::size_t n;
    };
    using Kind = std::variant<FixedCutoff, ContaminationRate, TopN>;

    explicit Thresholder(Kind kind) : kind_(kind) {}

    Kind kind_;
};

// Labels the `count` highest scores (ties: earlier index first).
Labels flag_top(std::span<const double> scores, std::size_t count);

}  // namespace tsad::eval
