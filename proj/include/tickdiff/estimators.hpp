// estimators.hpp: return-distribution and volatility-clustering statistics.
//
// All estimators are pure functions of their input and throw typed errors
// (InsufficientDataError, DegenerateError, ParameterError) instead of
// returning NaN.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tickdiff {

/// Empirical P(|r| >= x) at each threshold.
struct CcdfEstimate {
    std::vector<double> thresholds;
    std::vector<double> probabilities;
};

struct ZeroFreqEstimate {
    double p0 = 0.0;
    std::size_t n = 0;
};

struct HillEstimate {
    double alpha_h = 0.0;
    std::size_t k_tail = 0;
    /// Half-width of the asymptotic 95% interval, 1.96 * alpha_h / sqrt(k).
    double ci95 = 0.0;
    /// Nonzero magnitudes the tail was drawn from.
    std::size_t n_nonzero = 0;
    double tail_fraction = 0.0;
};

struct AcfEstimate {
    std::vector<std::size_t> lags;
    std::vector<double> rho;

    double at(std::size_t lag) const { return rho.at(lag - 1); }
};

/// DFA-1 result. The long-memory exponent of the ACF, rho(k) ~ k^-gamma,
/// relates to the Hurst exponent by H = 1 - gamma/2 (see gamma()).
struct DfaEstimate {
    double hurst = 0.0;
    std::vector<std::size_t> window_sizes;
    std::vector<double> fluctuation;
    double fit_stderr = 0.0;

    double gamma() const noexcept { return 2.0 * (1.0 - hurst); }
};

struct DfaSettings {
    std::size_t min_window = 16;
    /// 0 selects n/8.
    std::size_t max_window = 0;
    std::size_t n_windows = 10;
};

inline constexpr double kDefaultTailFraction = 0.05;
inline constexpr std::size_t kMinHillTail = 10;
inline constexpr std::size_t kMinHillSample = 100;

CcdfEstimate ccdf(std::span<const double> r, std::span<const double> thresholds);

/// `points` log-spaced thresholds between the smallest and largest nonzero |r|.
std::vector<double> log_thresholds(std::span<const double> r, std::size_t points);

ZeroFreqEstimate zero_frequency(std::span<const double> r);

/// Hill estimator on the k = max(10, ceil(tail_fraction * m)) largest of the
/// m nonzero magnitudes. Needs m >= 100 and 0 < tail_fraction <= 0.2.
/// A tail whose top k+1 order statistics hold fewer than three distinct
/// values is reported as degenerate.
HillEstimate hill(std::span<const double> r, double tail_fraction = kDefaultTailFraction);

/// Biased sample ACF (grand mean, full-sample denominator) at lags 1..max_lag.
/// Requires size > 4 * max_lag.
AcfEstimate acf(std::span<const double> x, std::size_t max_lag);

/// Integer scales, log-spaced between min and max, duplicates removed.
std::vector<std::size_t> dfa_scales(std::size_t min_window, std::size_t max_window, std::size_t n_windows);

DfaEstimate dfa_hurst(std::span<const double> x, const DfaSettings& settings = {});

std::vector<double> absolute(std::span<const double> x);
std::vector<double> squared(std::span<const double> x);

} // namespace tickdiff
