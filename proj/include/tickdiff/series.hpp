// series.hpp: price/return series, additive integration and tick grids.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tickdiff {

/// Price levels with their timestamps (seconds, or an event index).
struct PriceSeries {
    std::vector<double> timestamps;
    std::vector<double> prices;

    std::size_t size() const noexcept { return prices.size(); }

    /// Series sampled at consecutive integer event indices 0..n-1.
    static PriceSeries from_prices(std::vector<double> prices);
};

/// Additive return increments; bin_labels is empty unless the series
/// came out of a binning step.
struct ReturnSeries {
    std::vector<double> values;
    std::vector<long long> bin_labels;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> view() const noexcept { return values; }
};

/// Tick size of a price grid. Construction rejects delta <= 0.
class TickGrid {
public:
    explicit TickGrid(double delta);

    double delta() const noexcept { return delta_; }

    /// Grid index of a price: floor(price/delta + 1e-9). The small guard keeps
    /// exact grid points such as 1.05 on a 0.05 grid at index 21.
    long long index(double price) const noexcept;
    double snap(double price) const noexcept;

private:
    double delta_;
};

/// values[i] = prices[i+1] - prices[i]. Throws InsufficientDataError below 2 points.
ReturnSeries returns(const PriceSeries& p);

/// prices[0] = initial, prices[i+1] = prices[i] + values[i]; event-index timestamps.
PriceSeries integrate(const ReturnSeries& r, double initial);

/// Coarse-grain every price onto the grid (floor convention, also for negatives).
PriceSeries discretize(const PriceSeries& p, const TickGrid& grid);

/// Convenience: a zero or absent delta means "no grid" and returns p unchanged.
PriceSeries discretize_or_copy(const PriceSeries& p, std::optional<double> delta);

} // namespace tickdiff
