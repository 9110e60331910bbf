#include "tsad/confidence/confidence.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>

#include "tsad/core/format.hpp"
#include "tsad/error.hpp"
#include "tsad/eval/thresholding.hpp"

namespace tsad::confidence {

namespace {

// Above this size the tail is taken from the regularized incomplete beta
// function instead of summing binomial terms.
constexpr std::size_t kDirectSumLimit = 1000;

void check_inputs(std::span<const double> train_scores, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ParameterError("contamination must lie in (0, 1), got " + core::format_real(gamma));
    }
    if (train_scores.empty()) throw StateError("confidence needs at least one reference score");
}

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

Wide power(Wide base, std::size_t e) {
    Wide result = 1;
    for (; e > 0; e >>= 1) {
        if (e & 1) result *= base;
        base *= base;
    }
    return result;
}

// Sum of C(n,j) p^j q^(n-j) for j = k..n by the term ratio recurrence, in
// extended precision and rounded once. Needs 0 < k <= n and 0 < p < 1.
double direct_tail(std::size_t n, std::size_t k, Wide p) {
    const Wide q = 1 - p;
    Wide choose = 1;
    const std::size_t r = std::min(k, n - k);
    for (std::size_t i = 1; i <= r; ++i) choose = choose * static_cast<Wide>(n - r + i) / static_cast<Wide>(i);
    Wide term = choose * power(p, k) * power(q, n - k);
    Wide total = term;
    for (std::size_t j = k; j < n; ++j) {
        term = term * static_cast<Wide>(n - j) / static_cast<Wide>(j + 1) * p / q;
        total += term;
    }
    return std::min(1.0, static_cast<double>(total));
}

}  // namespace

double binomial_upper_tail(std::size_t n, std::size_t k, double p) {
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    if (n > kDirectSumLimit) {
        return boost::math::ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
    }
    return direct_tail(n, k, static_cast<Wide>(p));
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw StateError("quantile of an empty sequence");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> outlier_confidence(std::span<const double> train_scores,
                                       std::span<const double> test_scores, double gamma) {
    check_inputs(train_scores, gamma);
    std::vector<double> sorted(train_scores.begin(), train_scores.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const std::size_t k = eval::ceil_fraction(1.0 - gamma, n);

    std::vector<double> out(test_scores.size());
    for (std::size_t i = 0; i < test_scores.size(); ++i) {
        const auto below = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), test_scores[i]) - sorted.begin());
        if (n > kDirectSumLimit || k == 0) {
            out[i] = binomial_upper_tail(n, k, static_cast<double>(1 + below) / static_cast<double>(n + 2));
        } else {
            out[i] = direct_tail(n, k, static_cast<Wide>(1 + below) / static_cast<Wide>(n + 2));
        }
    }
    return out;
}

ConfidenceScores exceed_confidence(std::span<const double> train_scores,
                                   std::span<const double> test_scores, double gamma) {
    ConfidenceScores result;
    result.confidence = outlier_confidence(train_scores, test_scores, gamma);
    const double threshold = quantile(train_scores, 1.0 - gamma);
    result.prediction.resize(test_scores.size());
    for (std::size_t i = 0; i < test_scores.size(); ++i) {
        const bool outlier = test_scores[i] > threshold;
        result.prediction[i] = outlier ? 1 : 0;
        if (!outlier) result.confidence[i] = 1.0 - result.confidence[i];
    }
    return result;
}

ConfidenceScores detector_confidence(const detect::Detector& detector, const core::TimeSeries& train,
                                     const core::TimeSeries& test, double gamma) {
    const auto train_scores = detector.reference_scores(train);
    const auto test_scores = detector.decision_function(test);
    return exceed_confidence(train_scores, test_scores, gamma);
}

}  // namespace tsad::confidence
