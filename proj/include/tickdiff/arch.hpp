// arch.hpp: ARCH(1) return paths and the tick coarse-graining experiment.
//
//   r_t = sigma_t z_t,   sigma_t^2 = alpha0 + alpha1 r_{t-1}^2,   z_t ~ N(0,1)
//
// The latent price is the running sum of r_t; the observed price is that
// price floored onto a tick grid, and observed returns are its increments.
#pragma once

#include "tickdiff/series.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tickdiff {

struct ArchParams {
    double alpha0 = 0.1;
    double alpha1 = 0.9;
    std::size_t n = std::size_t{1} << 16;
    std::uint64_t seed = 1;
    double init_return = 0.0;
    double init_price = 0.0;
    /// Leading samples generated and discarded before the first returned one.
    std::size_t burn_in = 1024;

    /// Throws ParameterError unless alpha0 > 0, 0 <= alpha1 < 1, n >= 2.
    void validate() const;

    /// alpha0 / (1 - alpha1).
    double stationary_variance() const noexcept { return alpha0 / (1.0 - alpha1); }
    double stationary_sd() const noexcept;
};

ReturnSeries simulate_arch(const ArchParams& params);

struct CoarseGrainSweep {
    /// Absolute tick sizes; 0 means the undiscretized baseline.
    std::vector<double> deltas;
    std::size_t max_lag = 10;
    std::size_t n_seeds = 20;

    void validate(std::size_t n) const;

    /// Tick sizes {0, 0.25, 0.5, 1, 2} times the stationary standard deviation.
    static CoarseGrainSweep defaults(const ArchParams& params);
    static CoarseGrainSweep in_sd_units(const ArchParams& params, const std::vector<double>& multiples,
                                        std::size_t max_lag, std::size_t n_seeds);
};

struct CoarseGrainRow {
    double delta = 0.0;
    std::size_t lag = 0;
    double mean_acf = 0.0;
    double stderr_acf = 0.0;
    /// Replicates with a non-constant observed series (those entering the mean).
    std::size_t valid_replicates = 0;
    /// True when no replicate had a defined ACF at this tick size.
    bool degenerate = false;
};

/// Zero-return frequency of the observed series for one tick size.
struct ZeroFrequencyRow {
    double delta = 0.0;
    double mean_p0 = 0.0;
    double stderr_p0 = 0.0;
};

/// Undiscretized squared-return ACF next to the analytic alpha1^k.
struct SquaredAcfRow {
    std::size_t lag = 0;
    double mean_acf = 0.0;
    double stderr_acf = 0.0;
    double analytic = 0.0;
};

struct CoarseGrainResult {
    std::vector<CoarseGrainRow> acf;            // |observed return| ACF, delta-major
    std::vector<ZeroFrequencyRow> zero_frequency;
    std::vector<SquaredAcfRow> squared_baseline;

    const CoarseGrainRow& at(std::size_t delta_index, std::size_t lag) const;
};

/// Replicate r uses seed replicate_seed(params.seed, r); all tick sizes of a
/// replicate share one latent path. Replicates run in parallel.
CoarseGrainResult coarse_grain_experiment(const ArchParams& params, const CoarseGrainSweep& sweep);

/// Same computation with replicates run one after another (reference path).
CoarseGrainResult coarse_grain_experiment_serial(const ArchParams& params, const CoarseGrainSweep& sweep);

/// Least-squares fit of log(acf) = -k / tau over lags with positive acf; returns tau.
double fit_decay_timescale(const std::vector<double>& lag_acf);

} // namespace tickdiff
