#pragma once

// Row-by-row z-normalized squared distances between the subsequences of a
// query series and a reference series, driven by the STOMP sliding dot
// product recurrence. Shared by the matrix profile and kNN detectors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

namespace tsad::detect::internal {

// Rows between exact recomputations of the dot products. Each block of rows
// is also the unit of parallel work, so results do not depend on threading.
inline constexpr std::size_t kRecomputeInterval = 4096;

// Relative tolerance for treating a subsequence as constant.
inline constexpr double kFlatTolerance = 1e-8;

// Distances whose rounding uncertainty exceeds this are recomputed directly
// when they can reach the row's smallest entries.
inline constexpr double kRefineTolerance = 1e-9;

struct PreparedSeries {
    std::vector<double> centered;    // series minus its own mean
    std::vector<double> mean;        // per subsequence, of `centered`
    std::vector<double> inv_sd;      // 1/sd, 0 for flat subsequences
    std::vector<std::uint8_t> flat;
    std::vector<std::size_t> flat_indices;
    double scale = 0.0;              // max |x - mean(x)|
};

inline PreparedSeries center(std::span<const double> x) {
    PreparedSeries p;
    const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    p.centered.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        p.centered[i] = x[i] - mu;
        p.scale = std::max(p.scale, std::abs(p.centered[i]));
    }
    return p;
}

// Per-subsequence mean and population sd by direct two-pass sums.
inline void compute_stats(PreparedSeries& p, std::size_t m, double flat_threshold) {
    const std::size_t count = p.centered.size() - m + 1;
    p.mean.resize(count);
    p.inv_sd.resize(count);
    p.flat.resize(count);
    p.flat_indices.clear();
    const double dm = static_cast<double>(m);
    for (std::size_t i = 0; i < count; ++i) {
        const double* w = p.centered.data() + i;
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += w[k];
        const double mu = s / dm;
        double ss = 0.0;
        for (std::size_t k = 0; k < m; ++k) ss += (w[k] - mu) * (w[k] - mu);
        const double sd = std::sqrt(ss / dm);
        p.mean[i] = mu;
        if (sd <= flat_threshold) {
            p.flat[i] = 1;
            p.inv_sd[i] = 0.0;
            p.flat_indices.push_back(i);
        } else {
            p.flat[i] = 0;
            p.inv_sd[i] = 1.0 / sd;
        }
    }
}

// Flatness is judged against the larger scale of the two series so that both
// sides of a join use the same threshold.
inline void prepare_pair(PreparedSeries& query, PreparedSeries& reference, std::size_t m) {
    const double threshold = kFlatTolerance * std::max(query.scale, reference.scale);
    compute_stats(query, m, threshold);
    compute_stats(reference, m, threshold);
}

inline double dot(const double* a, const double* b, std::size_t m) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += a[k] * b[k];
    return s;
}

// Squared z-normalized distance from the windows themselves.
inline double direct_distance2(const PreparedSeries& q, std::size_t i, const PreparedSeries& r, std::size_t j,
                               std::size_t m) {
    const double* a = q.centered.data() + i;
    const double* b = r.centered.data() + j;
    const double mu_a = q.mean[i], inv_a = q.inv_sd[i];
    const double mu_b = r.mean[j], inv_b = r.inv_sd[j];
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = (a[k] - mu_a) * inv_a - (b[k] - mu_b) * inv_b;
        s += d * d;
    }
    return s;
}

// Near zero, sqrt magnifies the cancellation in 2m - 2(QT - m mu mu)/(sd sd).
// Entries whose error bound `bound * inv_sd[j]` leaves sqrt uncertain by more
// than kRefineTolerance, and that could still be among the `keep` smallest,
// are replaced by their direct value, smallest lower bound first.
inline void refine_row(const PreparedSeries& q, std::size_t i, const PreparedSeries& r, std::size_t m,
                       std::size_t keep, double bound, std::vector<double>& d2,
                       std::vector<std::pair<double, std::size_t>>& candidates,
                       std::vector<double>& best) {
    const double* inv_r = r.inv_sd.data();
    const std::size_t nr = d2.size();
    candidates.clear();
    best.assign(keep, std::numeric_limits<double>::infinity());
    auto offer = [&](double v) {
        if (v >= best.back()) return;
        auto pos = std::upper_bound(best.begin(), best.end(), v);
        best.insert(pos, v);
        best.pop_back();
    };
    for (std::size_t j = 0; j < nr; ++j) {
        const double c = d2[j];
        if (!std::isfinite(c)) continue;
        const double delta = bound * inv_r[j];
        // sqrt(c + delta) - sqrt(c - delta) is about delta / sqrt(c)
        if (delta * delta > 0.25 * kRefineTolerance * kRefineTolerance * c) {
            candidates.emplace_back(c - delta, j);
            offer(c + delta);
        } else {
            offer(c);
        }
    }
    if (candidates.empty()) return;
    std::sort(candidates.begin(), candidates.end());

    // `best` holds upper bounds of the keep smallest; refining lowers them.
    std::vector<double> exact;
    exact.reserve(keep);
    for (const auto& [lower, j] : candidates) {
        const double threshold = best.back();
        if (lower >= threshold) break;
        if (exact.size() >= keep && exact.back() <= kRefineTolerance * kRefineTolerance) break;
        const double v = direct_distance2(q, i, r, j, m);
        d2[j] = v;
        offer(v);
        exact.insert(std::upper_bound(exact.begin(), exact.end(), v), v);
        if (exact.size() > keep) exact.pop_back();
    }
}

/// Calls `row(i, d2)` for every query subsequence i, where d2[j] is the
/// squared z-normalized distance to reference subsequence j. With
/// `exclusion` > 0 (self-join), entries with |i - j| <= exclusion are +inf.
/// `row` may be invoked concurrently for different i. The `keep` smallest
/// entries of each row are accurate to kRefineTolerance after the sqrt.
template <class RowFn>
void scan_rows(const PreparedSeries& q, const PreparedSeries& r, std::size_t m,
               std::size_t exclusion, unsigned threads, std::size_t keep, RowFn&& row) {
    const std::size_t nq = q.mean.size();
    const std::size_t nr = r.mean.size();
    const double dm = static_cast<double>(m);
    const double* qx = q.centered.data();
    const double* rx = r.centered.data();

    std::vector<double> first_column(nq);
    for (std::size_t i = 0; i < nq; ++i) first_column[i] = dot(qx + i, rx, m);

    const std::size_t blocks = (nq + kRecomputeInterval - 1) / kRecomputeInterval;

    const double unit = 2.0 * std::numeric_limits<double>::epsilon() * q.scale * r.scale;

    auto run_block = [&](std::size_t b, std::vector<double>& qt, std::vector<double>& next,
                         std::vector<double>& d2, std::vector<std::pair<double, std::size_t>>& candidates,
                         std::vector<double>& best) {
        const std::size_t begin = b * kRecomputeInterval;
        const std::size_t end = std::min(nq, begin + kRecomputeInterval);
        for (std::size_t j = 0; j < nr; ++j) qt[j] = dot(qx + begin, rx + j, m);

        for (std::size_t i = begin; i < end; ++i) {
            if (i > begin) {
                const double drop = qx[i - 1];
                const double add = qx[i + m - 1];
                next[0] = first_column[i];
                const double* prev = qt.data();
                double* cur = next.data();
                for (std::size_t j = 1; j < nr; ++j) {
                    cur[j] = prev[j - 1] - drop * rx[j - 1] + add * rx[j + m - 1];
                }
                qt.swap(next);
            }

            if (q.flat[i]) {
                std::fill(d2.begin(), d2.end(), dm);
                for (std::size_t j : r.flat_indices) d2[j] = 0.0;
            } else {
                const double scaled_mu = dm * q.mean[i];
                const double factor = 2.0 * q.inv_sd[i];
                const double* mu_r = r.mean.data();
                const double* inv_r = r.inv_sd.data();
                const double* cur = qt.data();
                double* out = d2.data();
                for (std::size_t j = 0; j < nr; ++j) {
                    const double v = 2.0 * dm - (cur[j] - scaled_mu * mu_r[j]) * factor * inv_r[j];
                    out[j] = v > 0.0 ? v : 0.0;
                }
                for (std::size_t j : r.flat_indices) d2[j] = dm;
            }

            if (exclusion > 0) {
                const std::size_t lo = i >= exclusion ? i - exclusion : 0;
                const std::size_t hi = std::min(nr, i + exclusion + 1);
                for (std::size_t j = lo; j < hi; ++j) d2[j] = std::numeric_limits<double>::infinity();
            }
            if (!q.flat[i]) {
                // dot products and the recurrence steps since the last recompute
                const double ops = 4.0 * static_cast<double>(2 * m + (i - begin) + 1);
                refine_row(q, i, r, m, keep, ops * unit * q.inv_sd[i], d2, candidates, best);
            }
            row(i, std::span<const double>(d2));
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));

    auto worker = [&](unsigned t) {
        std::vector<double> qt(nr), next(nr), d2(nr), best;
        std::vector<std::pair<double, std::size_t>> candidates;
        for (std::size_t b = t; b < blocks; b += workers) run_block(b, qt, next, d2, candidates, best);
    };

    if (workers <= 1) {
        worker(0);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker, t);
}

}  // namespace tsad::detect::internal
