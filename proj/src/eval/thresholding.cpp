#include "tsad/eval/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tsad/core/format.hpp"
#include "tsad/error.hpp"

namespace tsad::eval {

std::size_t ceil_fraction(double fraction, std::size_t n) {
    const double x = fraction * static_cast<double>(n);
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(x));
}

Labels flag_top(std::span<const double> scores, std::size_t count) {
    count = std::min(count, scores.size());
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    Labels out(scores.size(), 0);
    for (std::size_t r = 0; r < count; ++r) out[order[r]] = 1;
    return out;
}

Thresholder Thresholder::fixed_cutoff(double cutoff) {
    if (std::isnan(cutoff)) throw ParameterError("FixedCutoff cutoff must not be NaN");
    return Thresholder(FixedCutoff{cutoff});
}

Thresholder Thresholder::contamination_rate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw ParameterError("ContaminationRate rate must lie in [0, 1], got " + core::format_real(rate));
    }
    return Thresholder(ContaminationRate{rate});
}

Thresholder Thresholder::top_n(std::size_t n) { return Thresholder(TopN{n}); }

Labels Thresholder::apply(std::span<const double> scores) const {
    if (scores.empty()) throw ValidationError("cannot threshold an empty score sequence");
    if (const auto* fixed = std::get_if<FixedCutoff>(&kind_)) {
        Labels out(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= fixed->cutoff ? 1 : 0;
        return out;
    }
    if (const auto* rate = std::get_if<ContaminationRate>(&kind_)) {
        return flag_top(scores, ceil_fraction(rate->rate, scores.size()));
    }
    return flag_top(scores, std::get<TopN>(kind_).n);
}

std::string Thresholder::descriptor() const {
    if (const auto* fixed = std::get_if<FixedCutoff>(&kind_)) {
        return "FixedCutoff(cutoff=" + core::format_real(fixed->cutoff) + ")";
    }
    if (const auto* rate = std::get_if<ContaminationRate>(&kind_)) {
        return "ContaminationRate(rate=" + core::format_real(rate->rate) + ")";
    }
    return "TopN(n=" + std::to_string(std::get<TopN>(kind_).n) + ")";
}

}  // namespace tsad::eval
