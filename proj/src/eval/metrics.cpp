#include "tsad/eval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "tsad/error.hpp"

namespace tsad::eval {

namespace {

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

void check_lengths(std::size_t labels, std::size_t scores) {
    if (labels != scores) {
        throw ValidationError("metric inputs differ in length (" + std::to_string(labels) +
                              " labels, " + std::to_string(scores) + " scores)");
    }
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

std::optional<double> auc_roc(std::span<const Label> y, std::span<const double> scores) {
    check_lengths(y.size(), scores.size());
    const std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), Label{1}));
    const std::size_t negatives = y.size() - positives;
    if (positives == 0 || negatives == 0) return std::nullopt;

    // Mann-Whitney: sum of the positives' mid-ranks in ascending order.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum = 0.0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start;
        while (stop < order.size() && scores[order[stop]] == scores[order[start]]) ++stop;
        const double mid_rank = static_cast<double>(start + stop + 1) / 2.0;  // 1-based
        for (std::size_t r = start; r < stop; ++r) {
            if (y[order[r]] == 1) rank_sum += mid_rank;
        }
        start = stop;
    }
    const double p = static_cast<double>(positives);
    const double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

std::optional<double> auc_pr(std::span<const Label> y, std::span<const double> scores) {
    check_lengths(y.size(), scores.size());
    const std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), Label{1}));
    if (positives == 0) return std::nullopt;

    // AP = sum over thresholds of (new positives / P) * precision. The sum is
    // carried in extended precision and rounded once.
    const auto order = descending_order(scores);
    std::size_t tp = 0;
    std::size_t fp = 0;
    Wide sum = 0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start;
        const std::size_t tp_before = tp;
        while (stop < order.size() && scores[order[stop]] == scores[order[start]]) {
            (y[order[stop]] == 1 ? tp : fp) += 1;
            ++stop;
        }
        if (tp > tp_before) {
            sum += static_cast<Wide>(tp - tp_before) * static_cast<Wide>(tp) / static_cast<Wide>(tp + fp);
        }
        start = stop;
    }
    return static_cast<double>(sum / static_cast<Wide>(positives));
}

BinaryScores binary_metrics(std::span<const Label> y, std::span<const Label> predicted) {
    check_lengths(y.size(), predicted.size());
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (predicted[i] == 1 && y[i] == 1) ++tp;
        else if (predicted[i] == 1) ++fp;
        else if (y[i] == 1) ++fn;
    }
    BinaryScores out;
    if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (out.precision + out.recall > 0.0) {
        out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    }
    return out;
}

std::string ThresholdMetric::name() const {
    const char* base = kind_ == Kind::precision ? "Precision" : kind_ == Kind::recall ? "Recall" : "F1";
    return std::string(base) + "(" + thresholder_.descriptor() + ")";
}

std::optional<double> ThresholdMetric::compute(std::span<const Label> y,
                                               std::span<const double> scores) const {
    check_lengths(y.size(), scores.size());
    const auto result = binary_metrics(y, thresholder_.apply(scores));
    switch (kind_) {
        case Kind::precision: return result.precision;
        case Kind::recall: return result.recall;
        case Kind::f1: return result.f1;
    }
    return std::nullopt;
}

}  // namespace tsad::eval
