#include "tsad/detect/matrix_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distance_rows.hpp"
#include "tsad/error.hpp"

namespace tsad::detect {

namespace {

void check_join_args(std::span<const double> query, std::span<const double> reference,
                     std::size_t m) {
    if (m < 1) throw ParameterError("subsequence length must be >= 1");
    if (query.size() < m || reference.size() < m) {
        throw ValidationError("subsequence length m=" + std::to_string(m) +
                              " exceeds a series length (query " + std::to_string(query.size()) +
                              ", reference " + std::to_string(reference.size()) + ")");
    }
}

void check_self_join_args(std::span<const double> x, std::size_t m) {
    check_join_args(x, x, m);
    const std::size_t count = x.size() - m + 1;
    if (count <= 2 * exclusion_zone(m) + 1) {
        throw ValidationError("series of length " + std::to_string(x.size()) +
                              " is too short for a self-join with m=" + std::to_string(m) +
                              " (every match falls in the exclusion zone)");
    }
}

std::vector<double> min_rows(const internal::PreparedSeries& q, const internal::PreparedSeries& r,
                             std::size_t m, std::size_t exclusion, unsigned threads) {
    std::vector<double> profile(q.mean.size());
    internal::scan_rows(q, r, m, exclusion, threads, 1, [&](std::size_t i, std::span<const double> d2) {
        profile[i] = std::sqrt(*std::min_element(d2.begin(), d2.end()));
    });
    return profile;
}

std::vector<double> knn_rows(const internal::PreparedSeries& q, const internal::PreparedSeries& r,
                             std::size_t m, std::size_t k, std::size_t exclusion, unsigned threads) {
    if (k < 1) throw ParameterError("k must be >= 1");
    std::vector<double> out(q.mean.size());
    const std::size_t nr = r.mean.size();
    internal::scan_rows(q, r, m, exclusion, threads, k, [&](std::size_t i, std::span<const double> d2) {
        thread_local std::vector<double> scratch;
        scratch.assign(d2.begin(), d2.end());
        std::size_t admissible = nr;
        if (exclusion > 0) {
            const std::size_t lo = i >= exclusion ? i - exclusion : 0;
            admissible -= std::min(nr, i + exclusion + 1) - lo;
        }
        const std::size_t take = std::min(k, admissible);
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take - 1),
                         scratch.end());
        std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take));
        double total = 0.0;
        for (std::size_t t = 0; t < take; ++t) total += std::sqrt(scratch[t]);
        out[i] = total / static_cast<double>(take);
    });
    return out;
}

}  // namespace

std::vector<double> matrix_profile_ab(std::span<const double> query,
                                      std::span<const double> reference, std::size_t m,
                                      unsigned threads) {
    check_join_args(query, reference, m);
    auto q = internal::center(query);
    auto r = internal::center(reference);
    internal::prepare_pair(q, r, m);
    return min_rows(q, r, m, 0, threads);
}

std::vector<double> matrix_profile_self(std::span<const double> x, std::size_t m, unsigned threads) {
    check_self_join_args(x, m);
    auto p = internal::center(x);
    internal::compute_stats(p, m, internal::kFlatTolerance * p.scale);
    return min_rows(p, p, m, exclusion_zone(m), threads);
}

std::vector<double> knn_distance_ab(std::span<const double> query,
                                    std::span<const double> reference, std::size_t m,
                                    std::size_t k, unsigned threads) {
    check_join_args(query, reference, m);
    auto q = internal::center(query);
    auto r = internal::center(reference);
    internal::prepare_pair(q, r, m);
    return knn_rows(q, r, m, k, 0, threads);
}

std::vector<double> knn_distance_self(std::span<const double> x, std::size_t m, std::size_t k,
                                      unsigned threads) {
    check_self_join_args(x, m);
    auto p = internal::center(x);
    internal::compute_stats(p, m, internal::kFlatTolerance * p.scale);
    return knn_rows(p, p, m, k, exclusion_zone(m), threads);
}

MatrixProfileDetector::MatrixProfileDetector(WindowSize window, MatrixProfileOptions options)
    : DetectorMixin(window), options_(options) {}

std::string MatrixProfileDetector::descriptor() const {
    std::string out = "MatrixProfile(window_size=" + window_spec().to_string();
    if (options_.self_join) out += ",self_join=true";
    return out + ")";
}

void MatrixProfileDetector::do_fit(std::span<const double> train) {
    resolve_window(train);
    reference_.assign(train.begin(), train.end());
}

AnomalyScores MatrixProfileDetector::do_decision_function(std::span<const double> x) const {
    check_length(x);
    const std::size_t m = window();
    const auto profile = options_.self_join ? matrix_profile_self(x, m, options_.threads)
                                            : matrix_profile_ab(x, reference_, m, options_.threads);
    return reverse_window(profile, m, x.size());
}

AnomalyScores MatrixProfileDetector::reference_scores(const TimeSeries& train) const {
    if (!is_fitted()) throw StateError(descriptor() + ": reference_scores called before fit");
    // An AB-join of the training data against itself is identically zero;
    // the self-join profile is the meaningful picture of normal behaviour.
    const std::size_t m = window();
    return reverse_window(matrix_profile_self(train.values(), m, options_.threads), m, train.size());
}

}  // namespace tsad::detect
