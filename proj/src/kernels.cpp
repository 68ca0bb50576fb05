// kernels.cpp: serial reference loops and their OpenMP counterparts.
#include "tickdiff/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace tickdiff::kernels {

double linear_detrend_rss(std::span<const double> y) noexcept
{
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    // Abscissa centered at (n-1)/2 so the slope and intercept decouple.
    const double xm = 0.5 * static_cast<double>(n - 1);
    double ym = 0.0;
    for (double v : y) ym += v;
    ym /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xm;
        sxy += dx * (y[i] - ym);
        sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - ym - slope * (static_cast<double>(i) - xm);
        rss += e * e;
    }
    return rss;
}

namespace serial {

std::vector<double> lag_products(std::span<const double> x, double mean, std::size_t max_lag)
{
    const std::size_t n = x.size();
    std::vector<double> c(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag && k < n; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t)
            acc += (x[t] - mean) * (x[t + k] - mean);
        c[k] = acc;
    }
    return c;
}

double dfa_fluctuation(std::span<const double> profile, std::size_t window)
{
    const std::size_t n_win = window ? profile.size() / window : 0;
    if (n_win == 0) return 0.0;
    double rss = 0.0;
    for (std::size_t w = 0; w < n_win; ++w)
        rss += linear_detrend_rss(profile.subspan(w * window, window));
    return std::sqrt(rss / static_cast<double>(n_win * window));
}

void snap_to_grid(std::span<const double> in, std::span<double> out, double delta)
{
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = std::floor(in[i] / delta + 1e-9) * delta;
}

double sum(std::span<const double> x) noexcept
{
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

} // namespace serial

namespace parallel {

namespace {

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

} // namespace

std::vector<double> lag_products(std::span<const double> x, double mean, std::size_t max_lag)
{
    const std::size_t n = x.size();
    const std::size_t lags = max_lag + 1;
    const std::size_t blocks = block_count(n);
    std::vector<double> partial(blocks * lags, 0.0);

    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        double* out = partial.data() + static_cast<std::size_t>(b) * lags;
        for (std::size_t k = 0; k < lags; ++k) {
            const std::size_t end = n > k ? std::min(hi, n - k) : 0;
            double acc = 0.0;
            for (std::size_t t = lo; t < end; ++t)
                acc += (x[t] - mean) * (x[t + k] - mean);
            out[k] = acc;
        }
    }

    std::vector<double> c(lags, 0.0);
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < lags; ++k)
            c[k] += partial[b * lags + k];
    return c;
}

double dfa_fluctuation(std::span<const double> profile, std::size_t window)
{
    const std::size_t n_win = window ? profile.size() / window : 0;
    if (n_win == 0) return 0.0;
    std::vector<double> rss(n_win);

    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(n_win); ++w)
        rss[w] = linear_detrend_rss(profile.subspan(static_cast<std::size_t>(w) * window, window));

    double total = 0.0;
    for (double v : rss) total += v;
    return std::sqrt(total / static_cast<double>(n_win * window));
}

void snap_to_grid(std::span<const double> in, std::span<double> out, double delta)
{
    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(in.size()); ++i)
        out[i] = std::floor(in[i] / delta + 1e-9) * delta;
}

double sum(std::span<const double> x) noexcept
{
    const std::size_t blocks = block_count(x.size());
    std::vector<double> partial(blocks, 0.0);

    #pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(x.size(), lo + kReductionBlock);
        double acc = 0.0;
        for (std::size_t t = lo; t < hi; ++t) acc += x[t];
        partial[b] = acc;
    }

    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

} // namespace parallel

} // namespace tickdiff::kernels
