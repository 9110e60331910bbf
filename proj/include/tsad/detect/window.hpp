#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsad::detect {

// Either an explicit subsequence length or a request to estimate it from
// the training data's spectrum.
class WindowSize {
public:
    static WindowSize fixed(std::size_t m);
    static WindowSize fft() { return WindowSize(0); }

    bool is_fft() const noexcept { return m_ == 0; }
    std::size_t value() const noexcept { return m_; }
    std::string to_string() const;

private:
    explicit WindowSize(std::size_t m) : m_(m) {}
    std::size_t m_;
};

struct WindowEstimate {
    std::size_t window = 0;
    bool fallback = false;  // no usable spectral peak; a clamped default was returned
};

inline constexpr std::size_t kDefaultWindowLower = 10;
inline constexpr std::size_t kDefaultWindowUpperCap = 1000;

/// Period of the dominant Fourier frequency of `x`.
///
/// The mean is removed and DFT amplitudes are taken for bins k = 1..n/2. Only
/// bins whose period round(n/k) lies in [lower, upper] compete; the largest
/// amplitude wins and ties go to the smaller k. When no bin qualifies, or
/// the series is flat, the result is clamp(n/10, lower, upper) with
/// `fallback` set. `upper` defaults to min(1000, n/4).
WindowEstimate estimate_window_fft(std::span<const double> x,
                                   std::size_t lower = kDefaultWindowLower,
                                   std::optional<std::size_t> upper = std::nullopt);

// Spreads n-m+1 subsequence scores back onto n points: each point gets the
// mean score of the windows covering it.
std::vector<double> reverse_window(std::span<const double> sub_scores, std::size_t m, std::size_t n);

}  // namespace tsad::detect
