#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tsad/core/time_series.hpp"
#include "tsad/detect/window.hpp"

namespace tsad::detect {

using core::Label;
using core::TimeSeries;

// One continuous score per observation; higher is more anomalous.
using AnomalyScores = std::vector<double>;

// Min-max rescaling to [0, 1]; a constant input maps to 0.5 everywhere.
AnomalyScores normalize_scores(std::span<const double> scores);

/// Common contract of every anomaly detector.
///
/// A detector is configured at construction, trained with `fit`, and then
/// scores unseen series with `decision_function` (raw, model-specific scale)
/// or `predict_proba` (rescaled to [0, 1]). After `fit` returns the detector
/// is not modified again, so the scoring methods may run concurrently.
///
/// New detectors implement `do_fit` and `do_decision_function`; deriving from
/// `DetectorMixin` supplies `clone`.
class Detector {
public:
    virtual ~Detector() = default;

    /// `labels` is accepted for interface symmetry; built-in detectors ignore it.
    Detector& fit(const TimeSeries& train, std::span<const Label> labels = {});
    AnomalyScores decision_function(const TimeSeries& x) const;
    AnomalyScores predict_proba(const TimeSeries& x) const;

    /// Scores describing normal behaviour, used as the reference distribution
    /// for confidence estimation. Defaults to `decision_function(train)`.
    virtual AnomalyScores reference_scores(const TimeSeries& train) const;

    bool is_fitted() const noexcept { return fitted_; }

    virtual std::string descriptor() const = 0;
    virtual std::unique_ptr<Detector> clone() const = 0;

protected:
    Detector() = default;
    Detector(const Detector&) = default;
    Detector& operator=(const Detector&) = default;

    virtual void do_fit(std::span<const double> train) = 0;
    virtual AnomalyScores do_decision_function(std::span<const double> x) const = 0;

private:
    bool fitted_ = false;
};

template <class Derived, class Base = Detector>
class DetectorMixin : public Base {
public:
    using Base::Base;

    std::unique_ptr<Detector> clone() const override {
        return std::make_unique<Derived>(static_cast<const Derived&>(*this));
    }
};

/// Base for detectors that operate on subsequences of length m. Resolves the
/// window at fit time (estimating it when configured as `fft`) and enforces
/// n_train >= 2m and length(x) >= m.
class WindowedDetector : public Detector {
public:
    const WindowSize& window_spec() const noexcept { return window_spec_; }
    /// Resolved subsequence length; 0 before fit.
    std::size_t window() const noexcept { return window_; }
    /// True when `fft` estimation found no spectral peak and used its fallback.
    bool window_fallback() const noexcept { return window_fallback_; }

protected:
    explicit WindowedDetector(WindowSize window) : window_spec_(window) {}

    void resolve_window(std::span<const double> train);
    void check_length(std::span<const double> x) const;

private:
    WindowSize window_spec_;
    std::size_t window_ = 0;
    bool window_fallback_ = false;
};

}  // namespace tsad::detect
