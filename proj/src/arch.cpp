#include "tickdiff/arch.hpp"

#include "tickdiff/errors.hpp"
#include "tickdiff/estimators.hpp"
#include "tickdiff/rng.hpp"

#include <cmath>
#include <exception>
#include <optional>
#include <string>

namespace tickdiff {

void ArchParams::validate() const
{
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw ParameterError("ARCH alpha0 must be > 0");
    if (!(alpha1 >= 0.0 && alpha1 < 1.0))
        throw ParameterError("ARCH alpha1 must lie in [0, 1) for covariance stationarity, got " +
                             std::to_string(alpha1));
    if (n < 2) throw ParameterError("ARCH path length must be at least 2");
    if (!std::isfinite(init_return) || !std::isfinite(init_price))
        throw ParameterError("ARCH initial return and price must be finite");
}

double ArchParams::stationary_sd() const noexcept
{
    return std::sqrt(stationary_variance());
}

ReturnSeries simulate_arch(const ArchParams& params)
{
    params.validate();
    Rng rng(params.seed);
    ReturnSeries out;
    out.values.resize(params.n);
    double prev = params.init_return;
    const std::size_t total = params.burn_in + params.n;
    for (std::size_t t = 0; t < total; ++t) {
        const double sigma = std::sqrt(params.alpha0 + params.alpha1 * prev * prev);
        prev = sigma * rng.gaussian();
        if (t >= params.burn_in) out.values[t - params.burn_in] = prev;
    }
    return out;
}

void CoarseGrainSweep::validate(std::size_t n) const
{
    if (deltas.empty()) throw ParameterError("coarse-grain sweep needs at least one tick size");
    for (double d : deltas)
        if (!(d >= 0.0) || !std::isfinite(d)) throw ParameterError("tick sizes must be finite and >= 0");
    if (max_lag < 1 || max_lag >= n) throw ParameterError("sweep max_lag must lie in [1, n)");
    if (n_seeds < 1) throw ParameterError("sweep needs at least one replicate");
}

CoarseGrainSweep CoarseGrainSweep::in_sd_units(const ArchParams& params, const std::vector<double>& multiples,
                                               std::size_t max_lag, std::size_t n_seeds)
{
    CoarseGrainSweep sweep;
    const double sd = params.stationary_sd();
    for (double m : multiples) sweep.deltas.push_back(m * sd);
    sweep.max_lag = max_lag;
    sweep.n_seeds = n_seeds;
    return sweep;
}

CoarseGrainSweep CoarseGrainSweep::defaults(const ArchParams& params)
{
    return in_sd_units(params, {0.0, 0.25, 0.5, 1.0, 2.0}, 10, 20);
}

const CoarseGrainRow& CoarseGrainResult::at(std::size_t delta_index, std::size_t lag) const
{
    const std::size_t lags = squared_baseline.size();
    return acf.at(delta_index * lags + (lag - 1));
}

namespace {

struct ReplicateOutcome {
    // Per tick size: |return| ACF (empty when the observed path is constant) and p0.
    std::vector<std::optional<std::vector<double>>> abs_acf;
    std::vector<double> p0;
    std::vector<double> sq_acf;
};

ReplicateOutcome run_replicate(const ArchParams& base, const CoarseGrainSweep& sweep, std::size_t index)
{
    ArchParams params = base;
    params.seed = replicate_seed(base.seed, index);
    const ReturnSeries latent = simulate_arch(params);
    const PriceSeries price = integrate(latent, params.init_price);

    ReplicateOutcome out;
    out.sq_acf = acf(squared(latent.values), sweep.max_lag).rho;
    for (double delta : sweep.deltas) {
        const ReturnSeries observed = returns(discretize_or_copy(price, delta));
        out.p0.push_back(zero_frequency(observed.values).p0);
        try {
            out.abs_acf.emplace_back(acf(absolute(observed.values), sweep.max_lag).rho);
        } catch (const DegenerateError&) {
            out.abs_acf.emplace_back(std::nullopt);
        }
    }
    return out;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr summarize(const std::vector<double>& xs)
{
    MeanStderr s;
    if (xs.empty()) return s;
    for (double v : xs) s.mean += v;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return s;
    double ss = 0.0;
    for (double v : xs) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    return s;
}

CoarseGrainResult collect(const ArchParams& params, const CoarseGrainSweep& sweep,
                          const std::vector<ReplicateOutcome>& reps)
{
    CoarseGrainResult result;
    for (std::size_t d = 0; d < sweep.deltas.size(); ++d) {
        for (std::size_t k = 1; k <= sweep.max_lag; ++k) {
            std::vector<double> xs;
            for (const auto& rep : reps)
                if (rep.abs_acf[d]) xs.push_back((*rep.abs_acf[d])[k - 1]);
            const MeanStderr s = summarize(xs);
            result.acf.push_back({sweep.deltas[d], k, s.mean, s.stderr_, xs.size(), xs.empty()});
        }
        std::vector<double> p0s;
        for (const auto& rep : reps) p0s.push_back(rep.p0[d]);
        const MeanStderr s = summarize(p0s);
        result.zero_frequency.push_back({sweep.deltas[d], s.mean, s.stderr_});
    }
    for (std::size_t k = 1; k <= sweep.max_lag; ++k) {
        std::vector<double> xs;
        for (const auto& rep : reps) xs.push_back(rep.sq_acf[k - 1]);
        const MeanStderr s = summarize(xs);
        result.squared_baseline.push_back({k, s.mean, s.stderr_, std::pow(params.alpha1, static_cast<double>(k))});
    }
    return result;
}

} // namespace

CoarseGrainResult coarse_grain_experiment(const ArchParams& params, const CoarseGrainSweep& sweep)
{
    params.validate();
    sweep.validate(params.n);
    std::vector<ReplicateOutcome> reps(sweep.n_seeds);
    std::exception_ptr failure;

    #pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sweep.n_seeds); ++i) {
        try {
            reps[i] = run_replicate(params, sweep, static_cast<std::size_t>(i));
        } catch (...) {
            #pragma omp critical(tickdiff_arch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return collect(params, sweep, reps);
}

CoarseGrainResult coarse_grain_experiment_serial(const ArchParams& params, const CoarseGrainSweep& sweep)
{
    params.validate();
    sweep.validate(params.n);
    std::vector<ReplicateOutcome> reps;
    reps.reserve(sweep.n_seeds);
    for (std::size_t i = 0; i < sweep.n_seeds; ++i) reps.push_back(run_replicate(params, sweep, i));
    return collect(params, sweep, reps);
}

double fit_decay_timescale(const std::vector<double>& lag_acf)
{
    double skk = 0.0, sky = 0.0;
    for (std::size_t i = 0; i < lag_acf.size(); ++i) {
        if (!(lag_acf[i] > 0.0)) continue;
        const auto k = static_cast<double>(i + 1);
        skk += k * k;
        sky += k * std::log(lag_acf[i]);
    }
    if (skk == 0.0 || !(sky < 0.0)) throw DegenerateError("no decaying positive ACF values to fit");
    return -skk / sky;
}

} // namespace tickdiff
