#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsad/detect/detector.hpp"

namespace tsad::detect {

// Exclusion half-width around the diagonal in self-joins: ceil(m/4).
constexpr std::size_t exclusion_zone(std::size_t m) noexcept { return (m + 3) / 4; }

/// AB-join matrix profile: for each length-m subsequence of `query`, the
/// minimum z-normalized Euclidean distance to any subsequence of `reference`.
/// A pair of constant subsequences is at distance 0; a constant subsequence
/// against a non-constant one is at sqrt(m). `threads` = 0 uses all cores;
/// the result is identical for every thread count.
std::vector<double> matrix_profile_ab(std::span<const double> query,
                                      std::span<const double> reference, std::size_t m,
                                      unsigned threads = 0);

/// Self-join matrix profile of `x`, ignoring matches within exclusion_zone(m)
/// of the diagonal.
std::vector<double> matrix_profile_self(std::span<const double> x, std::size_t m,
                                        unsigned threads = 0);

/// Mean z-normalized distance of each query subsequence to its k nearest
/// reference subsequences (fewer when the reference has fewer than k).
std::vector<double> knn_distance_ab(std::span<const double> query,
                                    std::span<const double> reference, std::size_t m,
                                    std::size_t k, unsigned threads = 0);

std::vector<double> knn_distance_self(std::span<const double> x, std::size_t m, std::size_t k,
                                      unsigned threads = 0);

struct MatrixProfileOptions {
    bool self_join = false;  // score each series against itself instead of the training data
    unsigned threads = 0;
};

/// Matrix Profile detector. Fit stores the training series as reference;
/// scoring computes the AB-join profile of the query against it (or the
/// self-join profile when configured) and spreads subsequence distances to
/// points by reverse windowing.
class MatrixProfileDetector final : public DetectorMixin<MatrixProfileDetector, WindowedDetector> {
public:
    explicit MatrixProfileDetector(WindowSize window = WindowSize::fft(),
                                   MatrixProfileOptions options = {});

    AnomalyScores reference_scores(const TimeSeries& train) const override;
    std::string descriptor() const override;

    const MatrixProfileOptions& options() const noexcept { return options_; }

protected:
    void do_fit(std::span<const double> train) override;
    AnomalyScores do_decision_function(std::span<const double> x) const override;

private:
    MatrixProfileOptions options_;
    std::vector<double> reference_;
};

}  // namespace tsad::detect
