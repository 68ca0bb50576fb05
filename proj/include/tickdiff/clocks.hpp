// clocks.hpp: aggregation of per-transaction returns under three clocks.
//
// Real time sums the returns of trades falling in fixed wall-clock bins.
// Transaction time sums fixed-size runs of consecutive trades, which removes
// trade-rate fluctuations. Shuffled transaction time permutes the
// per-transaction returns and re-aggregates them with the real-time bin
// counts, which keeps rate fluctuations but destroys return ordering.
//
// Read as a subordinated process Y(t) = X(tau(t)), the real-time bin count
// is the increment of the clock tau and the per-transaction return is the
// increment of X.
//
// No return and no bin crosses a session boundary.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tickdiff {

struct TradeRecord {
    double timestamp = 0.0;   // seconds since session open
    double price = 0.0;
    std::int64_t size = 0;    // 0 when unknown
};

struct Session {
    std::string label;        // e.g. a trading date
    double length_seconds = 0.0;
    std::vector<TradeRecord> trades;
};

enum class ClockMode { real_time, transaction_time, shuffled_transaction_time };
enum class ShuffleScope { full_sample, per_session };

std::string to_string(ClockMode mode);
ClockMode parse_clock_mode(const std::string& text);
std::string to_string(ShuffleScope scope);
ShuffleScope parse_shuffle_scope(const std::string& text);

struct ClockSpec {
    ClockMode mode = ClockMode::real_time;
    double bin_seconds = 900.0;
    std::uint64_t shuffle_seed = 0;
    ShuffleScope shuffle_scope = ShuffleScope::full_sample;
    /// Transaction-time bin size; unset means round(mean trades per real-time bin).
    std::optional<std::size_t> n_per_bin;

    void validate() const;
};

/// Per-transaction returns. Return i belongs to the later trade of its pair.
struct TransactionReturns {
    std::vector<double> values;
    std::vector<double> timestamps;
    std::vector<std::size_t> session;
};

struct BinnedReturns {
    std::vector<double> values;
    std::vector<std::size_t> counts;
    std::vector<double> bin_start;      // seconds since session open
    std::vector<double> bin_end;
    std::vector<std::size_t> session;
    /// Sum of per-transaction returns that fell outside every kept bin.
    double dropped_sum = 0.0;

    std::size_t size() const noexcept { return values.size(); }
};

TransactionReturns trade_returns(std::span<const Session> sessions);

BinnedReturns bin_real_time(std::span<const Session> sessions, const ClockSpec& spec);

BinnedReturns bin_transaction_time(std::span<const Session> sessions, std::size_t n_per_bin);

/// round(mean trades per real-time bin), at least 1.
std::size_t mean_trades_per_bin(const BinnedReturns& real_time);

/// Seeded shuffle according to spec.shuffle_scope.
BinnedReturns shuffle_transaction_time(std::span<const Session> sessions, const ClockSpec& spec);

/// Re-aggregation under an explicit permutation of the real-time-binned
/// per-transaction returns (identity reproduces bin_real_time exactly).
BinnedReturns shuffle_transaction_time(std::span<const Session> sessions, const ClockSpec& spec,
                                       std::span<const std::size_t> permutation);

/// Dispatch on spec.mode.
BinnedReturns aggregate(std::span<const Session> sessions, const ClockSpec& spec);

/// Last minus first price summed over sessions with at least one trade.
double total_price_change(std::span<const Session> sessions);

} // namespace tickdiff
