#include "tickdiff/runner.hpp"

#include "tickdiff/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tickdiff {

using nlohmann::json;

StageError::StageError(std::string stage, const Error& cause)
    : Error("stage '" + stage + "': " + cause.what()), stage_(std::move(stage)), code_(cause.exit_code())
{
}

namespace {

template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string instrument_label(std::size_t i)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "INST%02zu", i + 1);
    return buf;
}

struct WindowedReturns {
    std::vector<double> before;
    std::vector<double> after;
};

// Instrument -> before/after return series, from synthetic regimes or from
// real-time binned trade files split by date.
std::map<std::string, WindowedReturns> window_returns(const ExperimentConfig& cfg)
{
    std::map<std::string, WindowedReturns> out;
    if (cfg.source == InputSource::synthetic) {
        const std::uint64_t base = stage_seed(cfg.seed, "windows");
        const double sd = cfg.arch.stationary_sd();
        for (std::size_t i = 0; i < cfg.panel.instruments; ++i) {
            const std::string label = instrument_label(i);
            const auto make = [&](std::size_t w, double multiple) {
                return in_stage("simulate " + label, [&] {
                    ArchParams p = cfg.arch;
                    p.seed = replicate_seed(replicate_seed(base, i), w);
                    const PriceSeries latent = integrate(simulate_arch(p), p.init_price);
                    return returns(discretize_or_copy(latent, multiple * sd)).values;
                });
            };
            out[label] = {make(0, cfg.windows.before_tick), make(1, cfg.windows.after_tick)};
        }
        return out;
    }

    const TradeData data = in_stage("load", [&] { return load_trades_csv(cfg.csv_path, cfg.schema); });
    ClockSpec spec = cfg.clock;
    spec.mode = ClockMode::real_time;
    for (const auto& [symbol, sessions] : data.instruments) {
        std::vector<Session> before, after;
        for (const auto& s : sessions) (s.label < cfg.windows.split ? before : after).push_back(s);
        out[symbol] = in_stage("clock " + symbol, [&] {
            if (before.empty() || after.empty())
                throw InsufficientDataError("instrument " + symbol + " has no sessions on one side of the split");
            return WindowedReturns{bin_real_time(before, spec).values, bin_real_time(after, spec).values};
        });
    }
    if (out.empty()) throw StageError("load", InsufficientDataError("trade file holds no usable sessions"));
    return out;
}

std::map<std::string, std::vector<Session>> trade_streams(const ExperimentConfig& cfg)
{
    if (cfg.source == InputSource::synthetic) {
        SynthTradeParams p = cfg.synth;
        p.seed = stage_seed(cfg.seed, "synth");
        return {{"SYNTH", in_stage("synthesize", [&] { return synth_trades(p); })}};
    }
    TradeData data = in_stage("load", [&] { return load_trades_csv(cfg.csv_path, cfg.schema); });
    if (data.instruments.empty()) throw StageError("load", InsufficientDataError("trade file holds no usable sessions"));
    return std::move(data.instruments);
}

json acf_json(const AcfEstimate& a)
{
    return json(a.rho);
}

// -- experiments -------------------------------------------------------------

json run_arch_sweep(const ExperimentConfig& cfg, std::map<std::string, std::string>& files)
{
    ArchParams params = cfg.arch;
    params.seed = stage_seed(cfg.seed, "arch_sweep");
    const CoarseGrainSweep sweep =
        CoarseGrainSweep::in_sd_units(params, cfg.tick_multiples, cfg.sweep_max_lag, cfg.sweep_seeds);
    const CoarseGrainResult res = in_stage("coarse_grain", [&] { return coarse_grain_experiment(params, sweep); });
    const double sd = params.stationary_sd();

    std::ostringstream acf_csv, p0_csv, sq_csv;
    {
        CsvWriter w(acf_csv, {"delta", "delta_sd", "lag", "acf", "stderr", "valid_replicates", "degenerate"});
        for (const auto& row : res.acf) {
            w.cell(row.delta).cell(row.delta / sd).cell(row.lag).cell(row.mean_acf).cell(row.stderr_acf)
                .cell(row.valid_replicates).cell(std::string_view(row.degenerate ? "1" : "0"));
            w.end_row();
        }
    }
    {
        CsvWriter w(p0_csv, {"delta", "delta_sd", "p0", "stderr"});
        for (const auto& row : res.zero_frequency) {
            w.cell(row.delta).cell(row.delta / sd).cell(row.mean_p0).cell(row.stderr_p0);
            w.end_row();
        }
    }
    std::vector<double> sq_means;
    bool per_lag_ok = true;
    {
        CsvWriter w(sq_csv, {"lag", "acf", "stderr", "analytic"});
        for (const auto& row : res.squared_baseline) {
            w.cell(row.lag).cell(row.mean_acf).cell(row.stderr_acf).cell(row.analytic);
            w.end_row();
            sq_means.push_back(row.mean_acf);
            per_lag_ok = per_lag_ok && std::fabs(row.mean_acf - row.analytic) <= 0.05;
        }
    }
    files["arch_acf.csv"] = acf_csv.str();
    files["arch_zero_frequency.csv"] = p0_csv.str();
    files["arch_squared_baseline.csv"] = sq_csv.str();

    json summary;
    const double analytic_tau = 1.0 / std::fabs(std::log(params.alpha1));
    summary["analytic_timescale"] = params.alpha1 > 0.0 ? json(analytic_tau) : json(nullptr);
    try {
        const double tau = fit_decay_timescale(sq_means);
        summary["fitted_timescale"] = tau;
        summary["baseline_check_passed"] =
            per_lag_ok && params.alpha1 > 0.0 && std::fabs(tau - analytic_tau) <= 0.15 * analytic_tau;
    } catch (const DegenerateError&) {
        summary["fitted_timescale"] = nullptr;
        summary["baseline_check_passed"] = false;
    }
    json p0;
    for (const auto& row : res.zero_frequency) p0.push_back({{"delta", row.delta}, {"p0", row.mean_p0}});
    summary["zero_frequency"] = p0;
    return summary;
}

json run_distribution_compare(const ExperimentConfig& cfg, std::map<std::string, std::string>& files)
{
    const auto data = window_returns(cfg);
    std::ostringstream ccdf_csv, sum_csv;
    CsvWriter cw(ccdf_csv, {"instrument", "window", "threshold", "probability"});
    CsvWriter sw(sum_csv, {"instrument", "window", "n", "p0", "alpha_h", "k_tail", "ci95"});
    json summary = json::object();
    for (const auto& [label, w] : data) {
        std::vector<double> pooled = w.before;
        pooled.insert(pooled.end(), w.after.begin(), w.after.end());
        const std::vector<double> xs =
            in_stage("estimate ccdf " + label, [&] { return log_thresholds(pooled, cfg.estimators.ccdf_points); });
        for (const auto& [name, series] : {std::pair{"before", &w.before}, std::pair{"after", &w.after}}) {
            const std::string stage = std::string("estimate ") + label + " " + name;
            const CcdfEstimate c = in_stage(stage, [&] { return ccdf(*series, xs); });
            for (std::size_t i = 0; i < xs.size(); ++i) {
                cw.cell(std::string_view(label)).cell(std::string_view(name)).cell(xs[i]).cell(c.probabilities[i]);
                cw.end_row();
            }
            const ZeroFreqEstimate z = in_stage(stage, [&] { return zero_frequency(*series); });
            const HillEstimate h = in_stage(stage, [&] { return hill(*series, cfg.estimators.tail_fraction); });
            sw.cell(std::string_view(label)).cell(std::string_view(name)).cell(z.n).cell(z.p0).cell(h.alpha_h)
                .cell(h.k_tail).cell(h.ci95);
            sw.end_row();
            summary[label][name] = {{"p0", z.p0}, {"alpha_h", h.alpha_h}, {"ci95", h.ci95}};
        }
    }
    files["ccdf.csv"] = ccdf_csv.str();
    files["distribution_summary.csv"] = sum_csv.str();
    return summary;
}

json run_acf_compare(const ExperimentConfig& cfg, std::map<std::string, std::string>& files)
{
    const auto data = window_returns(cfg);
    std::ostringstream acf_csv, dfa_csv, hurst_csv;
    CsvWriter aw(acf_csv, {"instrument", "window", "lag", "rho"});
    CsvWriter dw(dfa_csv, {"instrument", "window", "window_size", "fluctuation"});
    CsvWriter hw(hurst_csv, {"instrument", "window", "hurst", "fit_stderr", "gamma"});
    json summary = json::object();
    for (const auto& [label, w] : data) {
        for (const auto& [name, series] : {std::pair{"before", &w.before}, std::pair{"after", &w.after}}) {
            const std::string stage = std::string("estimate ") + label + " " + name;
            const std::vector<double> mags = absolute(*series);
            const AcfEstimate a = in_stage(stage, [&] { return acf(mags, cfg.estimators.max_lag); });
            for (std::size_t k = 0; k < a.lags.size(); ++k) {
                aw.cell(std::string_view(label)).cell(std::string_view(name)).cell(a.lags[k]).cell(a.rho[k]);
                aw.end_row();
            }
            const DfaEstimate d = in_stage(stage, [&] { return dfa_hurst(mags, cfg.estimators.dfa); });
            for (std::size_t i = 0; i < d.window_sizes.size(); ++i) {
                dw.cell(std::string_view(label)).cell(std::string_view(name)).cell(d.window_sizes[i])
                    .cell(d.fluctuation[i]);
                dw.end_row();
            }
            hw.cell(std::string_view(label)).cell(std::string_view(name)).cell(d.hurst).cell(d.fit_stderr)
                .cell(d.gamma());
            hw.end_row();
            summary[label][name] = {{"acf", acf_json(a)}, {"hurst", d.hurst}};
        }
    }
    files["acf.csv"] = acf_csv.str();
    files["dfa.csv"] = dfa_csv.str();
    files["hurst.csv"] = hurst_csv.str();
    return summary;
}

json run_subordination_compare(const ExperimentConfig& cfg, std::map<std::string, std::string>& files)
{
    const auto streams = trade_streams(cfg);

    std::ostringstream bins_csv, acf_csv, ccdf_csv;
    CsvWriter bw(bins_csv, {"instrument", "mode", "bin", "session", "count", "return"});
    CsvWriter aw(acf_csv, {"instrument", "mode", "lag", "rho"});
    CsvWriter cw(ccdf_csv, {"instrument", "mode", "threshold", "probability"});
    json summary = json::object();
    for (const auto& [label, sessions] : streams) {
        ClockSpec spec = cfg.clock;
        spec.shuffle_seed = stage_seed(cfg.seed, "shuffle");
        const std::string stage = "clock " + label;
        const BinnedReturns real = in_stage(stage, [&] { return bin_real_time(sessions, spec); });
        const std::size_t n_per_bin = spec.n_per_bin ? *spec.n_per_bin : in_stage(stage, [&] {
            return mean_trades_per_bin(real);
        });
        const BinnedReturns trans = in_stage(stage, [&] { return bin_transaction_time(sessions, n_per_bin); });
        const BinnedReturns shuffled = in_stage(stage, [&] { return shuffle_transaction_time(sessions, spec); });

        const std::vector<std::pair<const char*, const BinnedReturns*>> modes = {
            {"real_time", &real}, {"transaction_time", &trans}, {"shuffled_transaction_time", &shuffled}};
        std::vector<double> pooled;
        for (const auto& [mode, b] : modes) pooled.insert(pooled.end(), b->values.begin(), b->values.end());
        const std::vector<double> xs =
            in_stage("estimate " + label, [&] { return log_thresholds(pooled, cfg.estimators.ccdf_points); });

        summary[label]["n_per_bin"] = n_per_bin;
        for (const auto& [mode, b] : modes) {
            for (std::size_t i = 0; i < b->size(); ++i) {
                bw.cell(std::string_view(label)).cell(std::string_view(mode)).cell(i).cell(b->session[i])
                    .cell(b->counts[i]).cell(b->values[i]);
                bw.end_row();
            }
            const std::string est_stage = "estimate " + label + " " + mode;
            const AcfEstimate a = in_stage(est_stage, [&] { return acf(absolute(b->values), cfg.estimators.max_lag); });
            for (std::size_t k = 0; k < a.lags.size(); ++k) {
                aw.cell(std::string_view(label)).cell(std::string_view(mode)).cell(a.lags[k]).cell(a.rho[k]);
                aw.end_row();
            }
            const CcdfEstimate c = in_stage(est_stage, [&] { return ccdf(b->values, xs); });
            for (std::size_t i = 0; i < xs.size(); ++i) {
                cw.cell(std::string_view(label)).cell(std::string_view(mode)).cell(xs[i]).cell(c.probabilities[i]);
                cw.end_row();
            }
            summary[label][mode] = {{"bins", b->size()}, {"acf", acf_json(a)}};
        }
    }
    files["subordination_bins.csv"] = bins_csv.str();
    files["subordination_acf.csv"] = acf_csv.str();
    files["subordination_ccdf.csv"] = ccdf_csv.str();
    return summary;
}

json run_panel_test(const ExperimentConfig& cfg, std::map<std::string, std::string>& files)
{
    const auto data = window_returns(cfg);

    struct Stat {
        std::string name;
        std::size_t lag;
        Alternative alt;
        std::map<std::string, double> before, after;
    };
    std::vector<Stat> stats;
    stats.push_back({"p0", 0, cfg.panel.alt_p0, {}, {}});
    stats.push_back({"alpha_h", 0, cfg.panel.alt_alpha_h, {}, {}});
    for (std::size_t k = 1; k <= cfg.panel.lags; ++k) stats.push_back({"rho", k, cfg.panel.alt_rho, {}, {}});
    stats.push_back({"hurst", 0, cfg.panel.alt_hurst, {}, {}});

    for (const auto& [label, w] : data) {
        for (const auto& [is_after, series] : {std::pair{false, &w.before}, std::pair{true, &w.after}}) {
            const std::string stage = "estimate " + label + (is_after ? " after" : " before");
            const std::vector<double> mags = absolute(*series);
            const double p0 = in_stage(stage, [&] { return zero_frequency(*series).p0; });
            const double ah = in_stage(stage, [&] { return hill(*series, cfg.estimators.tail_fraction).alpha_h; });
            const AcfEstimate a = in_stage(stage, [&] { return acf(mags, cfg.estimators.max_lag); });
            const double h = in_stage(stage, [&] { return dfa_hurst(mags, cfg.estimators.dfa).hurst; });
            for (auto& s : stats) {
                const double v = s.name == "p0" ? p0 : s.name == "alpha_h" ? ah : s.name == "hurst" ? h : a.at(s.lag);
                (is_after ? s.after : s.before)[label] = v;
            }
        }
    }

    std::ostringstream values_csv, ttest_csv;
    CsvWriter vw(values_csv, {"statistic", "lag", "instrument", "before", "after", "difference"});
    CsvWriter tw(ttest_csv, {"statistic", "lag", "n", "mean", "sd", "t_stat", "dof", "p_value", "alternative"});
    json table = json::array();
    for (const auto& s : stats) {
        const std::string stage = "ttest " + s.name + (s.lag ? "(" + std::to_string(s.lag) + ")" : "");
        const PanelDifference panel = in_stage(stage, [&] { return build_panel(s.before, s.after, s.name); });
        for (std::size_t i = 0; i < panel.size(); ++i) {
            vw.cell(std::string_view(s.name)).cell(s.lag).cell(std::string_view(panel.instruments[i]))
                .cell(panel.before[i]).cell(panel.after[i]).cell(panel.differences[i]);
            vw.end_row();
        }
        const TTestResult t = in_stage(stage, [&] { return paired_one_sided_ttest(panel, s.alt); });
        tw.cell(std::string_view(s.name)).cell(s.lag).cell(panel.size()).cell(t.mean).cell(t.sd).cell(t.t_stat)
            .cell(t.dof).cell(t.p_value).cell(std::string_view(to_string(t.alternative)));
        tw.end_row();
        table.push_back({{"statistic", s.name},
                         {"lag", s.lag},
                         {"n", panel.size()},
                         {"t_stat", t.t_stat},
                         {"p_value", t.p_value},
                         {"dof", t.dof},
                         {"alternative", to_string(t.alternative)}});
    }
    files["panel_values.csv"] = values_csv.str();
    files["ttest.csv"] = ttest_csv.str();
    files["ttest.json"] = table.dump(2) + "\n";
    return json{{"ttests", table}};
}

} // namespace

json settings_json(const ExperimentConfig& c)
{
    json s;
    s["experiment"] = {{"kind", to_string(c.kind)}, {"seed", c.seed}};
    s["input"] = {{"source", c.source == InputSource::csv ? "csv" : "synthetic"}, {"path", c.csv_path}};
    const char* fmt = c.schema.timestamp_format == TimestampFormat::epoch     ? "epoch"
                      : c.schema.timestamp_format == TimestampFormat::iso8601 ? "iso8601"
                                                                              : "auto";
    s["csv"] = {{"timestamp_col", c.schema.timestamp_col},
                {"price_col", c.schema.price_col},
                {"size_col", c.schema.size_col},
                {"symbol_col", c.schema.symbol_col},
                {"timestamp_format", fmt},
                {"utc_offset_seconds", c.schema.utc_offset_seconds},
                {"session_open", c.schema.session_open},
                {"session_close", c.schema.session_close},
                {"max_malformed_fraction", c.schema.max_malformed_fraction}};
    s["arch"] = {{"alpha0", c.arch.alpha0},
                 {"alpha1", c.arch.alpha1},
                 {"n", c.arch.n},
                 {"burn_in", c.arch.burn_in},
                 {"init_return", c.arch.init_return},
                 {"init_price", c.arch.init_price}};
    s["sweep"] = {{"ticks", c.tick_multiples}, {"max_lag", c.sweep_max_lag}, {"seeds", c.sweep_seeds}};
    const auto& y = c.synth;
    s["synth"] = {{"sessions", y.sessions},
                  {"session_seconds", y.session_seconds},
                  {"rate", y.rate},
                  {"rate_process", to_string(y.rate_process)},
                  {"rate_step_seconds", y.rate_step_seconds},
                  {"rate_persistence", y.rate_persistence},
                  {"rate_log_sd", y.rate_log_sd},
                  {"return_process", to_string(y.return_process)},
                  {"return_sd", y.return_sd},
                  {"arch_alpha0", y.arch_alpha0},
                  {"arch_alpha1", y.arch_alpha1},
                  {"arch_block", y.arch_block},
                  {"init_price", y.init_price},
                  {"tick", y.tick}};
    s["clock"] = {{"bin_seconds", c.clock.bin_seconds},
                  {"shuffle_scope", to_string(c.clock.shuffle_scope)},
                  {"n_per_bin", c.clock.n_per_bin ? json(*c.clock.n_per_bin) : json("auto")}};
    s["estimators"] = {{"tail_fraction", c.estimators.tail_fraction},
                       {"hill_min_tail", kMinHillTail},
                       {"max_lag", c.estimators.max_lag},
                       {"acf_convention", "biased_grand_mean"},
                       {"dfa_order", 1},
                       {"dfa_min_window", c.estimators.dfa.min_window},
                       {"dfa_max_window", c.estimators.dfa.max_window ? json(c.estimators.dfa.max_window) : json("n/8")},
                       {"dfa_windows", c.estimators.dfa.n_windows},
                       {"ccdf_points", c.estimators.ccdf_points}};
    s["windows"] = {{"before_tick", c.windows.before_tick}, {"after_tick", c.windows.after_tick},
                    {"split", c.windows.split}};
    s["panel"] = {{"instruments", c.panel.instruments},
                  {"lags", c.panel.lags},
                  {"alt_p0", to_string(c.panel.alt_p0)},
                  {"alt_alpha_h", to_string(c.panel.alt_alpha_h)},
                  {"alt_rho", to_string(c.panel.alt_rho)},
                  {"alt_hurst", to_string(c.panel.alt_hurst)}};
    s["rng"] = std::string(kRngAlgorithm);
    s["grid"] = {{"rounding", "floor"}, {"index_guard", 1e-9}};
    return s;
}

ResultBundle run_experiment(const ExperimentConfig& config)
{
    config.validate();
    if (config.source == InputSource::csv && config.csv_path != "-" && !std::filesystem::exists(config.csv_path))
        throw ConfigError("input file '" + config.csv_path + "' does not exist");

    ResultBundle bundle;
    json summary;
    switch (config.kind) {
    case ExperimentKind::arch_sweep: summary = run_arch_sweep(config, bundle.files); break;
    case ExperimentKind::distribution_compare: summary = run_distribution_compare(config, bundle.files); break;
    case ExperimentKind::acf_compare: summary = run_acf_compare(config, bundle.files); break;
    case ExperimentKind::subordination_compare: summary = run_subordination_compare(config, bundle.files); break;
    case ExperimentKind::panel_test: summary = run_panel_test(config, bundle.files); break;
    }

    const json settings = settings_json(config);
    json outputs = json::array();
    for (const auto& [name, contents] : bundle.files)
        outputs.push_back({{"file", name}, {"bytes", contents.size()}, {"fnv1a64", hex64(fnv1a64(contents))}});

    bundle.manifest = {{"tool", "tickdiff"},
                       {"version", kToolVersion},
                       {"experiment", to_string(config.kind)},
                       {"seed", config.seed},
                       {"config_hash", hex64(fnv1a64(settings.dump()))},
                       {"settings", settings},
                       {"outputs", outputs},
                       {"summary", summary}};
    bundle.files["manifest.json"] = bundle.manifest.dump(2) + "\n";
    return bundle;
}

void write_bundle(const ResultBundle& bundle, const std::filesystem::path& out_dir)
{
    namespace fs = std::filesystem;
    const fs::path staging = out_dir / ".tickdiff-staging";
    std::vector<fs::path> committed;
    try {
        fs::create_directories(out_dir);
        fs::remove_all(staging);
        fs::create_directories(staging);
        for (const auto& [name, contents] : bundle.files) {
            std::ofstream f(staging / name, std::ios::binary);
            f << contents;
            if (!f) throw ConsistencyError("failed writing " + (staging / name).string());
        }
        for (const auto& [name, contents] : bundle.files) {
            fs::rename(staging / name, out_dir / name);
            committed.push_back(out_dir / name);
        }
        fs::remove_all(staging);
    } catch (const fs::filesystem_error& e) {
        std::error_code ec;
        for (const auto& p : committed) fs::remove(p, ec);
        fs::remove_all(staging, ec);
        throw ConfigError("cannot write results to '" + out_dir.string() + "': " + e.code().message());
    } catch (...) {
        std::error_code ec;
        for (const auto& p : committed) fs::remove(p, ec);
        fs::remove_all(staging, ec);
        throw;
    }
}

} // namespace tickdiff
