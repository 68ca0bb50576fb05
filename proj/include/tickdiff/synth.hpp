// synth.hpp: synthetic trade streams with controllable activity and
// volatility clustering.
//
// Arrival process:
//   constant           evenly spaced trades, exactly rate * session_seconds per session
//   poisson            homogeneous Poisson arrivals at `rate`
//   doubly_stochastic  Poisson arrivals whose log-intensity is a stationary
//                      AR(1), piecewise constant over rate_step_seconds
//
// Per-trade returns:
//   iid   Gaussian with sd return_sd
//   arch  block ARCH(1): consecutive runs of arch_block trades share one
//         volatility, sigma_j^2 = alpha0 + alpha1 R_{j-1}^2 with R the
//         previous block's summed return; each trade draws N(0, sigma_j^2 / block)
#pragma once

#include "tickdiff/clocks.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tickdiff {

enum class RateProcess { constant, poisson, doubly_stochastic };
enum class ReturnProcess { iid, arch };

std::string to_string(RateProcess p);
RateProcess parse_rate_process(const std::string& text);
std::string to_string(ReturnProcess p);
ReturnProcess parse_return_process(const std::string& text);

struct SynthTradeParams {
    std::size_t sessions = 1;
    double session_seconds = 23400.0;
    double rate = 1.0;                       // mean trades per second

    RateProcess rate_process = RateProcess::constant;
    double rate_step_seconds = 60.0;
    double rate_persistence = 0.995;         // AR(1) coefficient per step
    double rate_log_sd = 1.0;                // stationary sd of the log-intensity

    ReturnProcess return_process = ReturnProcess::iid;
    double return_sd = 0.01;
    double arch_alpha0 = 1e-4;
    double arch_alpha1 = 0.9;
    std::size_t arch_block = 1;

    double init_price = 100.0;
    double tick = 0.0;                       // 0 keeps continuous prices
    std::uint64_t seed = 1;

    void validate() const;
};

/// One Session per simulated day, labelled "S0000", "S0001", ...
std::vector<Session> synth_trades(const SynthTradeParams& params);

} // namespace tickdiff
