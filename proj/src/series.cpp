#include "tickdiff/series.hpp"

#include "tickdiff/errors.hpp"
#include "tickdiff/kernels.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace tickdiff {

namespace {

constexpr double kGridGuard = 1e-9;

void require_finite(std::span<const double> xs, const char* what)
{
    for (double v : xs)
        if (!std::isfinite(v)) throw ParameterError(std::string(what) + " contains a non-finite value");
}

} // namespace

PriceSeries PriceSeries::from_prices(std::vector<double> prices)
{
    PriceSeries p;
    p.timestamps.resize(prices.size());
    std::iota(p.timestamps.begin(), p.timestamps.end(), 0.0);
    p.prices = std::move(prices);
    return p;
}

TickGrid::TickGrid(double delta) : delta_(delta)
{
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ParameterError("tick size must be positive and finite, got " + std::to_string(delta));
}

long long TickGrid::index(double price) const noexcept
{
    return static_cast<long long>(std::floor(price / delta_ + kGridGuard));
}

double TickGrid::snap(double price) const noexcept
{
    return std::floor(price / delta_ + kGridGuard) * delta_;
}

ReturnSeries returns(const PriceSeries& p)
{
    if (p.size() < 2)
        throw InsufficientDataError("return computation needs at least 2 prices, got " + std::to_string(p.size()));
    ReturnSeries r;
    r.values.resize(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        r.values[i] = p.prices[i + 1] - p.prices[i];
    return r;
}

PriceSeries integrate(const ReturnSeries& r, double initial)
{
    if (!std::isfinite(initial)) throw ParameterError("initial price must be finite");
    require_finite(r.values, "return series");
    std::vector<double> prices(r.size() + 1);
    prices[0] = initial;
    for (std::size_t i = 0; i < r.size(); ++i)
        prices[i + 1] = prices[i] + r.values[i];
    return PriceSeries::from_prices(std::move(prices));
}

PriceSeries discretize(const PriceSeries& p, const TickGrid& grid)
{
    PriceSeries out;
    out.timestamps = p.timestamps;
    out.prices.resize(p.size());
    kernels::parallel::snap_to_grid(p.prices, out.prices, grid.delta());
    return out;
}

PriceSeries discretize_or_copy(const PriceSeries& p, std::optional<double> delta)
{
    if (!delta || *delta == 0.0) return p;
    return discretize(p, TickGrid(*delta));
}

} // namespace tickdiff
