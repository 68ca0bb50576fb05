#include "tickdiff/estimators.hpp"

#include "tickdiff/errors.hpp"
#include "tickdiff/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace tickdiff {

namespace {

bool is_constant(std::span<const double> x)
{
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *lo == *hi;
}

} // namespace

std::vector<double> absolute(std::span<const double> x)
{
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::fabs(v); });
    return out;
}

std::vector<double> squared(std::span<const double> x)
{
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v * v; });
    return out;
}

CcdfEstimate ccdf(std::span<const double> r, std::span<const double> thresholds)
{
    if (r.empty()) throw InsufficientDataError("ccdf of an empty series");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0)) throw ParameterError("ccdf thresholds must be positive");
        if (i > 0 && thresholds[i] < thresholds[i - 1]) throw ParameterError("ccdf thresholds must be sorted");
    }

    std::vector<double> mags = absolute(r);
    std::sort(mags.begin(), mags.end());
    const double n = static_cast<double>(mags.size());

    CcdfEstimate est;
    est.thresholds.assign(thresholds.begin(), thresholds.end());
    est.probabilities.reserve(thresholds.size());
    for (double x : thresholds) {
        const auto first = std::lower_bound(mags.begin(), mags.end(), x);
        est.probabilities.push_back(static_cast<double>(mags.end() - first) / n);
    }
    return est;
}

std::vector<double> log_thresholds(std::span<const double> r, std::size_t points)
{
    double lo = INFINITY, hi = 0.0;
    for (double v : r) {
        const double a = std::fabs(v);
        if (a > 0.0) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
    }
    if (hi == 0.0) throw DegenerateError("no nonzero returns to place ccdf thresholds");
    if (points < 2 || lo == hi) return {lo};

    std::vector<double> xs(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        xs[i] = lo * std::exp(step * static_cast<double>(i));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

ZeroFreqEstimate zero_frequency(std::span<const double> r)
{
    if (r.empty()) throw InsufficientDataError("zero frequency of an empty series");
    const auto zeros = std::count(r.begin(), r.end(), 0.0);
    return {static_cast<double>(zeros) / static_cast<double>(r.size()), r.size()};
}

HillEstimate hill(std::span<const double> r, double tail_fraction)
{
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.2))
        throw ParameterError("hill tail fraction must lie in (0, 0.2], got " + std::to_string(tail_fraction));

    std::vector<double> mags;
    mags.reserve(r.size());
    for (double v : r)
        if (v != 0.0) mags.push_back(std::fabs(v));
    const std::size_t m = mags.size();
    if (m < kMinHillSample)
        throw InsufficientDataError("hill needs at least 100 nonzero returns, got " + std::to_string(m));

    const auto k = std::max(kMinHillTail,
                            static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(m))));
    std::partial_sort(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k + 1), mags.end(),
                      std::greater<>());

    const double threshold = mags[k];
    std::size_t distinct = 1;
    for (std::size_t i = 1; i <= k; ++i)
        if (mags[i] != mags[i - 1]) ++distinct;

    double log_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        log_sum += std::log(mags[i] / threshold);
    if (distinct < 3 || !(log_sum > 0.0))
        throw DegenerateError("hill tail is degenerate: top order statistics are tied");

    HillEstimate est;
    est.k_tail = k;
    est.alpha_h = static_cast<double>(k) / log_sum;
    est.ci95 = 1.96 * est.alpha_h / std::sqrt(static_cast<double>(k));
    est.n_nonzero = m;
    est.tail_fraction = tail_fraction;
    return est;
}

AcfEstimate acf(std::span<const double> x, std::size_t max_lag)
{
    if (max_lag < 1) throw ParameterError("acf max_lag must be at least 1");
    if (x.size() <= 4 * max_lag)
        throw InsufficientDataError("acf needs more than 4*max_lag = " + std::to_string(4 * max_lag) +
                                    " observations, got " + std::to_string(x.size()));
    if (is_constant(x)) throw DegenerateError("acf of a constant series (zero variance)");

    const double mean = kernels::parallel::sum(x) / static_cast<double>(x.size());
    const std::vector<double> c = kernels::parallel::lag_products(x, mean, max_lag);

    AcfEstimate est;
    est.lags.resize(max_lag);
    est.rho.resize(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        est.lags[k - 1] = k;
        est.rho[k - 1] = std::clamp(c[k] / c[0], -1.0, 1.0);
    }
    return est;
}

std::vector<std::size_t> dfa_scales(std::size_t min_window, std::size_t max_window, std::size_t n_windows)
{
    if (min_window < 4) throw ParameterError("dfa min_window must be at least 4");
    if (max_window <= min_window) throw ParameterError("dfa max_window must exceed min_window");
    if (n_windows < 4) throw ParameterError("dfa needs at least 4 scales");

    std::vector<std::size_t> scales;
    const double lo = std::log(static_cast<double>(min_window));
    const double hi = std::log(static_cast<double>(max_window));
    for (std::size_t i = 0; i < n_windows; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_windows - 1);
        const auto s = static_cast<std::size_t>(std::lround(std::exp(lo + t * (hi - lo))));
        if (scales.empty() || s > scales.back()) scales.push_back(s);
    }
    if (scales.size() < 4) throw ParameterError("dfa scale range too narrow for 4 distinct windows");
    return scales;
}

DfaEstimate dfa_hurst(std::span<const double> x, const DfaSettings& settings)
{
    const std::size_t n = x.size();
    const std::size_t max_window = settings.max_window ? settings.max_window : n / 8;
    if (max_window < 4 || n < 4 * max_window)
        throw InsufficientDataError("dfa needs at least 4*max_window observations, got " + std::to_string(n));
    const std::vector<std::size_t> scales = dfa_scales(settings.min_window, max_window, settings.n_windows);
    if (is_constant(x)) throw DegenerateError("dfa of a constant series (zero variance)");

    const double mean = kernels::parallel::sum(x) / static_cast<double>(n);
    std::vector<double> profile(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] - mean;
        profile[i] = acc;
    }

    DfaEstimate est;
    est.window_sizes = scales;
    est.fluctuation.reserve(scales.size());
    for (std::size_t s : scales) {
        const double f = kernels::parallel::dfa_fluctuation(profile, s);
        if (!(f > 0.0)) throw DegenerateError("dfa fluctuation vanished at window " + std::to_string(s));
        est.fluctuation.push_back(f);
    }

    // Ordinary least squares of log F(s) on log s.
    const auto m = static_cast<double>(scales.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        mx += std::log(static_cast<double>(scales[i]));
        my += std::log(est.fluctuation[i]);
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const double dx = std::log(static_cast<double>(scales[i])) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(est.fluctuation[i]) - my);
    }
    est.hurst = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const double dx = std::log(static_cast<double>(scales[i])) - mx;
        const double e = std::log(est.fluctuation[i]) - my - est.hurst * dx;
        rss += e * e;
    }
    est.fit_stderr = std::sqrt(rss / (m - 2.0) / sxx);
    return est;
}

} // namespace tickdiff
