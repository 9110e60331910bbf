#include "tsad/detect/window.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "tsad/error.hpp"

namespace tsad::detect {

namespace {

// The FFTW planner is not re-entrant; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex mutex;
    return mutex;
}

class RealForwardPlan {
public:
    RealForwardPlan(std::vector<double>& in, std::vector<std::complex<double>>& out) {
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(in.size()), in.data(),
                                     reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
        if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
    }
    ~RealForwardPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    RealForwardPlan(const RealForwardPlan&) = delete;
    RealForwardPlan& operator=(const RealForwardPlan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

}  // namespace

WindowSize WindowSize::fixed(std::size_t m) {
    if (m < 2) throw ParameterError("window_size must be >= 2, got " + std::to_string(m));
    return WindowSize(m);
}

std::string WindowSize::to_string() const { return is_fft() ? "fft" : std::to_string(m_); }

WindowEstimate estimate_window_fft(std::span<const double> x, std::size_t lower,
                                   std::optional<std::size_t> upper_opt) {
    const std::size_t n = x.size();
    if (lower < 1) throw ParameterError("window estimation lower bound must be >= 1");
    if (n < 2 * lower) {
        throw ParameterError("window estimation needs n >= 2*lower (n=" + std::to_string(n) +
                             ", lower=" + std::to_string(lower) + ")");
    }
    const std::size_t upper = upper_opt.value_or(std::min(kDefaultWindowUpperCap, n / 4));
    if (lower > upper) {
        throw ParameterError("window estimation band is empty (lower=" + std::to_string(lower) +
                             ", upper=" + std::to_string(upper) + ", n=" + std::to_string(n) + ")");
    }
    const WindowEstimate fallback{std::clamp(n / 10, lower, upper), true};

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double spread = 0.0;
    for (double v : x) spread = std::max(spread, std::abs(v - mean));
    if (spread <= 1e-12 * std::max(std::abs(mean), spread)) return fallback;

    std::vector<double> in(n);
    std::transform(x.begin(), x.end(), in.begin(), [mean](double v) { return v - mean; });
    std::vector<std::complex<double>> spectrum(n / 2 + 1);
    RealForwardPlan(in, spectrum).execute();

    std::size_t best_k = 0;
    double best_amplitude = 0.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const std::size_t period = (2 * n + k) / (2 * k);  // round(n / k)
        if (period < lower || period > upper) continue;
        const double amplitude = std::abs(spectrum[k]);
        if (amplitude > best_amplitude) {
            best_amplitude = amplitude;
            best_k = k;
        }
    }
    if (best_k == 0) return fallback;
    return {(2 * n + best_k) / (2 * best_k), false};
}

std::vector<double> reverse_window(std::span<const double> sub_scores, std::size_t m, std::size_t n) {
    if (m < 1 || m > n || sub_scores.size() != n - m + 1) {
        throw ValidationError("reverse_window: expected " +
                              (m >= 1 && m <= n ? std::to_string(n - m + 1) : std::string("n-m+1")) +
                              " subsequence scores for n=" + std::to_string(n) +
                              ", m=" + std::to_string(m) + ", got " +
                              std::to_string(sub_scores.size()));
    }
    std::vector<double> prefix(sub_scores.size() + 1, 0.0);
    for (std::size_t j = 0; j < sub_scores.size(); ++j) prefix[j + 1] = prefix[j] + sub_scores[j];

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t first = i + 1 >= m ? i + 1 - m : 0;
        const std::size_t last = std::min(i, n - m);
        out[i] = (prefix[last + 1] - prefix[first]) / static_cast<double>(last - first + 1);
    }
    return out;
}

}  // namespace tsad::detect
