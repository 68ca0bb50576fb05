// config.hpp: experiment configuration (INI-style key/value file).
//
//   [experiment]  kind, seed, out
//   [input]       source = synthetic | csv, path
//   [csv]         timestamp_col, price_col, size_col, symbol_col,
//                 timestamp_format, utc_offset_seconds, session_open,
//                 session_close, max_malformed_fraction
//   [arch]        alpha0, alpha1, n, burn_in, init_price
//   [sweep]       ticks (stationary-sd multiples), max_lag, seeds
//   [synth]       sessions, session_seconds, rate, rate_process, ...
//   [clock]       bin_seconds, shuffle_scope, n_per_bin
//   [estimators]  tail_fraction, max_lag, dfa_min_window, dfa_max_window,
//                 dfa_windows, ccdf_points
//   [windows]     before_tick, after_tick (sd multiples), split
//   [panel]       instruments, lags, alt_p0, alt_alpha_h, alt_rho, alt_hurst
//
// Unknown sections or keys are rejected. Every key has a default; see
// README.md for the full table.
#pragma once

#include "tickdiff/arch.hpp"
#include "tickdiff/clocks.hpp"
#include "tickdiff/estimators.hpp"
#include "tickdiff/io.hpp"
#include "tickdiff/panel.hpp"
#include "tickdiff/synth.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tickdiff {

enum class ExperimentKind { arch_sweep, distribution_compare, acf_compare, subordination_compare, panel_test };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

enum class InputSource { synthetic, csv };

struct EstimatorSettings {
    double tail_fraction = kDefaultTailFraction;
    std::size_t max_lag = 10;
    DfaSettings dfa;
    std::size_t ccdf_points = 40;
};

struct WindowSettings {
    /// Synthetic regimes: tick sizes in units of the stationary sd.
    double before_tick = 2.0;
    double after_tick = 0.5;
    /// CSV input: sessions dated before `split` form the before window.
    std::string split;
};

struct PanelSettings {
    std::size_t instruments = 5;
    std::size_t lags = 4;
    Alternative alt_p0 = Alternative::less;
    Alternative alt_alpha_h = Alternative::less;
    Alternative alt_rho = Alternative::greater;
    Alternative alt_hurst = Alternative::greater;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::arch_sweep;
    std::uint64_t seed = 0;
    std::string out_dir = "results";

    InputSource source = InputSource::synthetic;
    std::string csv_path;
    TradeCsvSchema schema;

    ArchParams arch;
    std::vector<double> tick_multiples{0.0, 0.25, 0.5, 1.0, 2.0};
    std::size_t sweep_max_lag = 10;
    std::size_t sweep_seeds = 20;

    SynthTradeParams synth;
    ClockSpec clock;
    EstimatorSettings estimators;
    WindowSettings windows;
    PanelSettings panel;

    /// Throws ConfigError for inconsistent settings.
    void validate() const;
};

/// Parses the INI text. The seed key is mandatory unless `seed_override` is given.
ExperimentConfig parse_config(std::istream& in, std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

} // namespace tickdiff
