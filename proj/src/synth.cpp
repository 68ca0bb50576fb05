#include "tickdiff/synth.hpp"

#include "tickdiff/errors.hpp"
#include "tickdiff/rng.hpp"
#include "tickdiff/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tickdiff {

std::string to_string(RateProcess p)
{
    switch (p) {
    case RateProcess::constant: return "constant";
    case RateProcess::poisson: return "poisson";
    case RateProcess::doubly_stochastic: return "doubly_stochastic";
    }
    return "unknown";
}

RateProcess parse_rate_process(const std::string& text)
{
    if (text == "constant") return RateProcess::constant;
    if (text == "poisson") return RateProcess::poisson;
    if (text == "doubly_stochastic") return RateProcess::doubly_stochastic;
    throw ParameterError("unknown rate process '" + text + "'");
}

std::string to_string(ReturnProcess p)
{
    return p == ReturnProcess::iid ? "iid" : "arch";
}

ReturnProcess parse_return_process(const std::string& text)
{
    if (text == "iid") return ReturnProcess::iid;
    if (text == "arch") return ReturnProcess::arch;
    throw ParameterError("unknown return process '" + text + "'");
}

void SynthTradeParams::validate() const
{
    if (sessions < 1) throw ParameterError("synthetic stream needs at least one session");
    if (!(session_seconds > 0.0)) throw ParameterError("session_seconds must be > 0");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ParameterError("trade rate must be > 0");
    if (!(rate_step_seconds > 0.0)) throw ParameterError("rate_step_seconds must be > 0");
    if (!(rate_persistence >= 0.0 && rate_persistence < 1.0)) throw ParameterError("rate_persistence must lie in [0, 1)");
    if (!(rate_log_sd >= 0.0)) throw ParameterError("rate_log_sd must be >= 0");
    if (!(return_sd > 0.0)) throw ParameterError("return_sd must be > 0");
    if (!(arch_alpha0 > 0.0)) throw ParameterError("arch_alpha0 must be > 0");
    if (!(arch_alpha1 >= 0.0 && arch_alpha1 < 1.0)) throw ParameterError("arch_alpha1 must lie in [0, 1)");
    if (arch_block < 1) throw ParameterError("arch_block must be at least 1");
    if (!(tick >= 0.0) || !std::isfinite(init_price)) throw ParameterError("tick must be >= 0, init_price finite");
}

namespace {

constexpr std::size_t kArchBurnInBlocks = 1024;

void poisson_arrivals(Rng& rng, double lambda, double from, double to, std::vector<double>& out)
{
    if (!(lambda > 0.0)) return;
    double t = from;
    while (true) {
        t += rng.exponential() / lambda;
        if (t >= to) return;
        out.push_back(t);
    }
}

std::vector<double> arrival_times(const SynthTradeParams& p, Rng& rng)
{
    std::vector<double> times;
    switch (p.rate_process) {
    case RateProcess::constant: {
        const auto n = static_cast<std::size_t>(std::llround(p.rate * p.session_seconds));
        times.reserve(n);
        for (std::size_t i = 0; i < n; ++i) times.push_back((static_cast<double>(i) + 0.5) / p.rate);
        break;
    }
    case RateProcess::poisson:
        poisson_arrivals(rng, p.rate, 0.0, p.session_seconds, times);
        break;
    case RateProcess::doubly_stochastic: {
        const double sd = p.rate_log_sd;
        const double innovation = std::sqrt(1.0 - p.rate_persistence * p.rate_persistence);
        double x = rng.gaussian();
        for (double start = 0.0; start < p.session_seconds; start += p.rate_step_seconds) {
            const double lambda = p.rate * std::exp(sd * x - 0.5 * sd * sd);
            poisson_arrivals(rng, lambda, start, std::min(start + p.rate_step_seconds, p.session_seconds), times);
            x = p.rate_persistence * x + innovation * rng.gaussian();
        }
        break;
    }
    }
    return times;
}

std::vector<double> trade_increments(const SynthTradeParams& p, std::size_t n, Rng& rng)
{
    std::vector<double> r(n);
    if (p.return_process == ReturnProcess::iid) {
        for (double& v : r) v = p.return_sd * rng.gaussian();
        return r;
    }
    const std::size_t block = p.arch_block;
    const double scale = 1.0 / std::sqrt(static_cast<double>(block));
    double prev_block = 0.0;
    const std::size_t total_blocks = kArchBurnInBlocks + (n + block - 1) / block;
    std::size_t out = 0;
    for (std::size_t j = 0; j < total_blocks; ++j) {
        const double sigma = std::sqrt(p.arch_alpha0 + p.arch_alpha1 * prev_block * prev_block) * scale;
        double sum = 0.0;
        for (std::size_t i = 0; i < block; ++i) {
            const double v = sigma * rng.gaussian();
            sum += v;
            if (j >= kArchBurnInBlocks && out < n) r[out++] = v;
        }
        prev_block = sum;
    }
    return r;
}

} // namespace

std::vector<Session> synth_trades(const SynthTradeParams& params)
{
    params.validate();
    Rng arrivals(stage_seed(params.seed, "synth.arrivals"));
    Rng increments(stage_seed(params.seed, "synth.returns"));

    std::vector<Session> sessions(params.sessions);
    std::size_t n_total = 0;
    for (std::size_t s = 0; s < params.sessions; ++s) {
        char label[16];
        std::snprintf(label, sizeof label, "S%04zu", s);
        sessions[s].label = label;
        sessions[s].length_seconds = params.session_seconds;
        for (double t : arrival_times(params, arrivals)) sessions[s].trades.push_back({t, 0.0, 1});
        n_total += sessions[s].trades.size();
    }

    const std::vector<double> r = trade_increments(params, n_total, increments);
    std::vector<double> latent(n_total);
    double price = params.init_price;
    for (std::size_t i = 0; i < n_total; ++i) {
        price += r[i];
        latent[i] = price;
    }
    if (params.tick > 0.0) {
        const TickGrid grid(params.tick);
        for (double& v : latent) v = grid.snap(v);
    }

    std::size_t i = 0;
    for (auto& s : sessions)
        for (auto& t : s.trades) t.price = latent[i++];
    return sessions;
}

} // namespace tickdiff
