#include "tickdiff/clocks.hpp"

#include "tickdiff/errors.hpp"
#include "tickdiff/rng.hpp"

#include <cmath>

namespace tickdiff {

std::string to_string(ClockMode mode)
{
    switch (mode) {
    case ClockMode::real_time: return "real_time";
    case ClockMode::transaction_time: return "transaction_time";
    case ClockMode::shuffled_transaction_time: return "shuffled_transaction_time";
    }
    return "unknown";
}

ClockMode parse_clock_mode(const std::string& text)
{
    if (text == "real_time" || text == "real") return ClockMode::real_time;
    if (text == "transaction_time" || text == "transaction") return ClockMode::transaction_time;
    if (text == "shuffled_transaction_time" || text == "shuffled") return ClockMode::shuffled_transaction_time;
    throw ParameterError("unknown clock mode '" + text + "'");
}

std::string to_string(ShuffleScope scope)
{
    return scope == ShuffleScope::full_sample ? "full_sample" : "per_session";
}

ShuffleScope parse_shuffle_scope(const std::string& text)
{
    if (text == "full_sample") return ShuffleScope::full_sample;
    if (text == "per_session") return ShuffleScope::per_session;
    throw ParameterError("unknown shuffle scope '" + text + "'");
}

void ClockSpec::validate() const
{
    if (!(bin_seconds > 0.0) || !std::isfinite(bin_seconds)) throw ParameterError("bin_seconds must be > 0");
    if (n_per_bin && *n_per_bin == 0) throw ParameterError("n_per_bin must be at least 1");
}

TransactionReturns trade_returns(std::span<const Session> sessions)
{
    TransactionReturns out;
    bool any = false;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        const auto& trades = sessions[s].trades;
        if (trades.size() >= 2) any = true;
        for (std::size_t i = 1; i < trades.size(); ++i) {
            if (trades[i].timestamp < trades[i - 1].timestamp)
                throw ConsistencyError("trades of session '" + sessions[s].label + "' are not time-ordered");
            out.values.push_back(trades[i].price - trades[i - 1].price);
            out.timestamps.push_back(trades[i].timestamp);
            out.session.push_back(s);
        }
    }
    if (!any) throw InsufficientDataError("no session holds at least 2 trades");
    return out;
}

namespace {

std::size_t bins_in_session(const Session& s, double bin_seconds)
{
    if (!(s.length_seconds > 0.0)) throw ParameterError("session '" + s.label + "' has non-positive length");
    return static_cast<std::size_t>(std::floor(s.length_seconds / bin_seconds + 1e-9));
}

// Per-transaction returns grouped into real-time bins, in time order, plus
// the per-bin layout. The kept returns are contiguous per bin.
struct RealTimeLayout {
    BinnedReturns bins;
    std::vector<double> kept;
    std::vector<std::size_t> kept_per_session;
};

RealTimeLayout layout_real_time(std::span<const Session> sessions, const ClockSpec& spec)
{
    spec.validate();
    std::size_t n_trades = 0;
    for (const auto& s : sessions) n_trades += s.trades.size();
    if (n_trades == 0) throw InsufficientDataError("real-time binning of an empty trade stream");

    RealTimeLayout out;
    auto& bins = out.bins;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        const Session& session = sessions[s];
        const std::size_t nb = bins_in_session(session, spec.bin_seconds);
        const std::size_t first_bin = bins.values.size();
        for (std::size_t b = 0; b < nb; ++b) {
            bins.values.push_back(0.0);
            bins.counts.push_back(0);
            bins.bin_start.push_back(static_cast<double>(b) * spec.bin_seconds);
            bins.bin_end.push_back(static_cast<double>(b + 1) * spec.bin_seconds);
            bins.session.push_back(s);
        }
        std::size_t kept = 0;
        const auto& trades = session.trades;
        for (std::size_t i = 1; i < trades.size(); ++i) {
            if (trades[i].timestamp < trades[i - 1].timestamp)
                throw ConsistencyError("trades of session '" + session.label + "' are not time-ordered");
            const double r = trades[i].price - trades[i - 1].price;
            const double t = trades[i].timestamp;
            auto b = static_cast<std::ptrdiff_t>(std::floor(t / spec.bin_seconds));
            // A trade exactly at the end of the last full bin belongs to it.
            if (nb > 0 && static_cast<std::size_t>(b) == nb && t <= static_cast<double>(nb) * spec.bin_seconds)
                b = static_cast<std::ptrdiff_t>(nb) - 1;
            if (t < 0.0 || b < 0 || static_cast<std::size_t>(b) >= nb) {
                bins.dropped_sum += r;
                continue;
            }
            bins.values[first_bin + static_cast<std::size_t>(b)] += r;
            bins.counts[first_bin + static_cast<std::size_t>(b)] += 1;
            out.kept.push_back(r);
            ++kept;
        }
        out.kept_per_session.push_back(kept);
    }
    return out;
}

BinnedReturns reaggregate(const RealTimeLayout& layout, std::span<const std::size_t> permutation)
{
    const std::size_t n = layout.kept.size();
    if (permutation.size() != n)
        throw ConsistencyError("shuffle permutation has " + std::to_string(permutation.size()) +
                               " entries but real-time bins hold " + std::to_string(n) + " transactions");
    std::vector<char> seen(n, 0);
    for (std::size_t p : permutation) {
        if (p >= n || seen[p]) throw ConsistencyError("shuffle permutation is not a permutation");
        seen[p] = 1;
    }

    BinnedReturns out = layout.bins;
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < out.size(); ++b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < out.counts[b]; ++j) acc += layout.kept[permutation[cursor++]];
        out.values[b] = acc;
    }
    return out;
}

} // namespace

BinnedReturns bin_real_time(std::span<const Session> sessions, const ClockSpec& spec)
{
    return layout_real_time(sessions, spec).bins;
}

BinnedReturns bin_transaction_time(std::span<const Session> sessions, std::size_t n_per_bin)
{
    if (n_per_bin == 0) throw ParameterError("n_per_bin must be at least 1");
    const TransactionReturns tr = trade_returns(sessions);
    if (tr.values.size() < n_per_bin)
        throw InsufficientDataError("fewer per-transaction returns than n_per_bin = " + std::to_string(n_per_bin));

    BinnedReturns out;
    std::size_t i = 0;
    while (i < tr.values.size()) {
        const std::size_t s = tr.session[i];
        std::size_t end = i;
        while (end < tr.values.size() && tr.session[end] == s) ++end;
        std::size_t j = i;
        for (; j + n_per_bin <= end; j += n_per_bin) {
            double acc = 0.0;
            for (std::size_t q = j; q < j + n_per_bin; ++q) acc += tr.values[q];
            out.values.push_back(acc);
            out.counts.push_back(n_per_bin);
            out.bin_start.push_back(tr.timestamps[j]);
            out.bin_end.push_back(tr.timestamps[j + n_per_bin - 1]);
            out.session.push_back(s);
        }
        for (; j < end; ++j) out.dropped_sum += tr.values[j];
        i = end;
    }
    return out;
}

std::size_t mean_trades_per_bin(const BinnedReturns& real_time)
{
    if (real_time.size() == 0) throw InsufficientDataError("no real-time bins to average trade counts over");
    double total = 0.0;
    for (std::size_t c : real_time.counts) total += static_cast<double>(c);
    const auto n = static_cast<std::size_t>(std::llround(total / static_cast<double>(real_time.size())));
    return n == 0 ? 1 : n;
}

BinnedReturns shuffle_transaction_time(std::span<const Session> sessions, const ClockSpec& spec,
                                       std::span<const std::size_t> permutation)
{
    return reaggregate(layout_real_time(sessions, spec), permutation);
}

BinnedReturns shuffle_transaction_time(std::span<const Session> sessions, const ClockSpec& spec)
{
    const RealTimeLayout layout = layout_real_time(sessions, spec);
    std::vector<std::size_t> perm;
    if (spec.shuffle_scope == ShuffleScope::full_sample) {
        perm = random_permutation(layout.kept.size(), spec.shuffle_seed);
    } else {
        perm.reserve(layout.kept.size());
        std::size_t offset = 0;
        for (std::size_t s = 0; s < layout.kept_per_session.size(); ++s) {
            const std::size_t n = layout.kept_per_session[s];
            for (std::size_t p : random_permutation(n, replicate_seed(spec.shuffle_seed, s)))
                perm.push_back(offset + p);
            offset += n;
        }
    }
    return reaggregate(layout, perm);
}

BinnedReturns aggregate(std::span<const Session> sessions, const ClockSpec& spec)
{
    switch (spec.mode) {
    case ClockMode::real_time: return bin_real_time(sessions, spec);
    case ClockMode::transaction_time: {
        const std::size_t n = spec.n_per_bin ? *spec.n_per_bin : mean_trades_per_bin(bin_real_time(sessions, spec));
        return bin_transaction_time(sessions, n);
    }
    case ClockMode::shuffled_transaction_time: return shuffle_transaction_time(sessions, spec);
    }
    throw ParameterError("unknown clock mode");
}

double total_price_change(std::span<const Session> sessions)
{
    double total = 0.0;
    for (const auto& s : sessions)
        if (!s.trades.empty()) total += s.trades.back().price - s.trades.front().price;
    return total;
}

} // namespace tickdiff
