// tickdiff command-line front end.
//
//   tickdiff simulate   [--alpha0 --alpha1 --n --tick --trades ...]  > series.csv
//   tickdiff discretize --tick D                                    < prices.csv
//   tickdiff estimate {ccdf|zero|hill|acf|dfa}                      < series.csv
//   tickdiff clock {real|transaction|shuffled}                      < trades.csv
//   tickdiff ttest [--alternative less|greater]                     < panel.csv
//   tickdiff run CONFIG [--out DIR]
//
// Every subcommand reads from --input (default "-", standard input) and writes
// CSV to --output (default "-", standard output).
#include "tickdiff/arch.hpp"
#include "tickdiff/clocks.hpp"
#include "tickdiff/config.hpp"
#include "tickdiff/errors.hpp"
#include "tickdiff/estimators.hpp"
#include "tickdiff/io.hpp"
#include "tickdiff/panel.hpp"
#include "tickdiff/runner.hpp"
#include "tickdiff/series.hpp"
#include "tickdiff/synth.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using namespace tickdiff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool quiet = false;
};

struct Io {
    std::string input = "-";
    std::string output = "-";
};

void add_io(CLI::App* cmd, Io& io, bool with_input = true)
{
    if (with_input) cmd->add_option("-i,--input", io.input, "Input CSV path, '-' for stdin");
    cmd->add_option("-o,--output", io.output, "Output CSV path, '-' for stdout");
}

// Output stream that is either stdout or a file opened for writing.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot open output '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close()
    {
        stream().flush();
        if (!stream()) throw Error("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> input_series(const Io& io, const std::string& column, bool from_prices)
{
    const CsvTable table = read_csv_file(io.input);
    std::vector<double> x = table.numeric_column(column);
    if (!from_prices) return x;
    return returns(PriceSeries::from_prices(std::move(x))).values;
}

void log(const Globals& g, const std::string& line)
{
    if (!g.quiet) std::cerr << line << '\n';
}

// --- simulate ---------------------------------------------------------------

struct SimulateOpts {
    Io io;
    ArchParams arch;
    double tick = 0.0;
    bool trades = false;
    SynthTradeParams synth;
    std::string rate_process = "constant";
    std::string return_process = "iid";
    std::string symbol = "SYNTH";
    long long first_day = 0;
};

void run_simulate(const Globals& g, SimulateOpts& o)
{
    const std::uint64_t seed = g.seed.value_or(1);
    Sink sink(o.io.output);
    if (o.trades) {
        o.synth.seed = seed;
        o.synth.rate_process = parse_rate_process(o.rate_process);
        o.synth.return_process = parse_return_process(o.return_process);
        o.synth.tick = o.tick;
        const auto sessions = synth_trades(o.synth);
        write_trades_csv(sink.stream(), o.symbol, sessions, o.first_day);
        std::size_t n = 0;
        for (const auto& s : sessions) n += s.trades.size();
        log(g, "simulated " + std::to_string(n) + " trades in " + std::to_string(sessions.size()) + " sessions");
    } else {
        o.arch.seed = seed;
        const ReturnSeries r = simulate_arch(o.arch);
        const PriceSeries latent = integrate(r, o.arch.init_price);
        const PriceSeries observed = discretize_or_copy(latent, o.tick);
        CsvWriter w(sink.stream(), {"index", "price", "latent_price"});
        for (std::size_t i = 0; i < observed.size(); ++i)
            w.cell(i).cell(observed.prices[i]).cell(latent.prices[i]).end_row();
        log(g, "simulated " + std::to_string(r.size()) + " ARCH returns");
    }
    sink.close();
}

// --- discretize -------------------------------------------------------------

struct DiscretizeOpts {
    Io io;
    std::string column = "price";
    double tick = 0.0;
};

void run_discretize(const Globals& g, const DiscretizeOpts& o)
{
    const CsvTable table = read_csv_file(o.io.input);
    const PriceSeries p = PriceSeries::from_prices(table.numeric_column(o.column));
    const PriceSeries q = discretize(p, TickGrid(o.tick));
    Sink sink(o.io.output);
    CsvWriter w(sink.stream(), {"index", "price", "observed_price"});
    for (std::size_t i = 0; i < q.size(); ++i) w.cell(i).cell(p.prices[i]).cell(q.prices[i]).end_row();
    sink.close();
    log(g, "discretized " + std::to_string(q.size()) + " prices at tick " + format_double(o.tick));
}

// --- estimate ---------------------------------------------------------------

struct EstimateOpts {
    Io io;
    std::string which;
    std::string column = "return";
    bool from_prices = false;
    std::string transform = "none";
    double tail_fraction = kDefaultTailFraction;
    std::size_t max_lag = 10;
    std::size_t points = 40;
    DfaSettings dfa;
};

std::vector<double> apply_transform(const std::vector<double>& x, const std::string& t)
{
    if (t == "none") return x;
    if (t == "abs") return absolute(x);
    if (t == "square") return squared(x);
    throw ParameterError("transform must be none, abs or square");
}

void run_estimate(const Globals& g, const EstimateOpts& o)
{
    const std::vector<double> x = apply_transform(input_series(o.io, o.column, o.from_prices), o.transform);
    Sink sink(o.io.output);
    auto& out = sink.stream();
    if (o.which == "ccdf") {
        const auto est = ccdf(x, log_thresholds(x, o.points));
        CsvWriter w(out, {"threshold", "ccdf"});
        for (std::size_t i = 0; i < est.thresholds.size(); ++i)
            w.cell(est.thresholds[i]).cell(est.probabilities[i]).end_row();
    } else if (o.which == "zero") {
        const auto est = zero_frequency(x);
        CsvWriter w(out, {"n", "p0"});
        w.cell(est.n).cell(est.p0).end_row();
    } else if (o.which == "hill") {
        const auto est = hill(x, o.tail_fraction);
        CsvWriter w(out, {"alpha_h", "ci95", "k_tail", "n_nonzero", "tail_fraction"});
        w.cell(est.alpha_h).cell(est.ci95).cell(est.k_tail).cell(est.n_nonzero).cell(est.tail_fraction).end_row();
    } else if (o.which == "acf") {
        const auto est = acf(x, o.max_lag);
        CsvWriter w(out, {"lag", "acf"});
        for (std::size_t i = 0; i < est.lags.size(); ++i) w.cell(est.lags[i]).cell(est.rho[i]).end_row();
    } else if (o.which == "dfa") {
        const auto est = dfa_hurst(x, o.dfa);
        CsvWriter w(out, {"window", "fluctuation", "hurst", "fit_stderr"});
        for (std::size_t i = 0; i < est.window_sizes.size(); ++i)
            w.cell(est.window_sizes[i]).cell(est.fluctuation[i]).cell(est.hurst).cell(est.fit_stderr).end_row();
    }
    sink.close();
    log(g, o.which + " estimated on " + std::to_string(x.size()) + " values");
}

// --- clock ------------------------------------------------------------------

struct ClockOpts {
    Io io;
    std::string mode;
    TradeCsvSchema schema;
    std::string timestamp_format = "auto";
    ClockSpec spec;
    std::string scope = "full_sample";
    std::size_t n_per_bin = 0;
};

void run_clock(const Globals& g, ClockOpts& o)
{
    if (o.mode == "real") o.spec.mode = ClockMode::real_time;
    else if (o.mode == "transaction") o.spec.mode = ClockMode::transaction_time;
    else o.spec.mode = ClockMode::shuffled_transaction_time;
    o.spec.shuffle_scope = parse_shuffle_scope(o.scope);
    o.spec.shuffle_seed = g.seed.value_or(0);
    if (o.n_per_bin > 0) o.spec.n_per_bin = o.n_per_bin;
    if (o.timestamp_format == "auto") o.schema.timestamp_format = TimestampFormat::automatic;
    else if (o.timestamp_format == "epoch") o.schema.timestamp_format = TimestampFormat::epoch;
    else o.schema.timestamp_format = TimestampFormat::iso8601;
    o.spec.validate();

    const TradeData data = load_trades_csv(o.io.input, o.schema);
    for (const auto& w : data.report.warnings) log(g, "warning: " + w);
    if (data.instruments.empty()) throw InsufficientDataError("trade file holds no usable sessions");

    Sink sink(o.io.output);
    CsvWriter w(sink.stream(), {"symbol", "session", "bin", "bin_start", "bin_end", "trades", "return"});
    for (const auto& [symbol, sessions] : data.instruments) {
        const BinnedReturns b = aggregate(sessions, o.spec);
        for (std::size_t i = 0; i < b.size(); ++i) {
            w.cell(symbol).cell(sessions[b.session[i]].label).cell(i);
            w.cell(b.bin_start[i]).cell(b.bin_end[i]).cell(b.counts[i]).cell(b.values[i]).end_row();
        }
        log(g, symbol + ": " + std::to_string(b.size()) + " bins under " + to_string(o.spec.mode));
    }
    sink.close();
}

// --- ttest ------------------------------------------------------------------

struct TtestOpts {
    Io io;
    std::string alternative = "greater";
    std::string statistic = "value";
};

void run_ttest(const Globals& g, const TtestOpts& o)
{
    const CsvTable table = read_csv_file(o.io.input);
    const std::vector<double> before = table.numeric_column("before");
    const std::vector<double> after = table.numeric_column("after");
    const std::size_t col = table.column("instrument");
    std::map<std::string, double> b, a;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::string& label = table.rows[i][col];
        if (b.contains(label)) throw KeyingError("duplicate instrument '" + label + "'");
        b[label] = before[i];
        a[label] = after[i];
    }
    const PanelDifference panel = build_panel(b, a, o.statistic);
    const TTestResult t = paired_one_sided_ttest(panel, parse_alternative(o.alternative));
    Sink sink(o.io.output);
    CsvWriter w(sink.stream(), {"statistic", "n", "mean", "sd", "t_stat", "dof", "p_value", "alternative"});
    w.cell(o.statistic).cell(panel.size()).cell(t.mean).cell(t.sd).cell(t.t_stat).cell(t.dof).cell(t.p_value);
    w.cell(to_string(t.alternative)).end_row();
    sink.close();
    log(g, "t = " + format_double(t.t_stat) + ", p = " + format_double(t.p_value));
}

// --- run --------------------------------------------------------------------

void run_config(const Globals& g, const std::string& positional)
{
    const std::string path = positional.empty() ? g.config : positional;
    if (path.empty()) throw ConfigError("run needs a config file (positional or --config)");
    const ExperimentConfig cfg = load_config(path, g.seed);
    const std::string out = g.out_dir.empty() ? cfg.out_dir : g.out_dir;
    const ResultBundle bundle = run_experiment(cfg);
    write_bundle(bundle, out);
    log(g, to_string(cfg.kind) + ": wrote " + std::to_string(bundle.files.size()) + " files to " + out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tick-size and time-scale diagnostics for price series"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "Experiment config (INI)");
    app.add_option("--seed", g.seed, "Global seed, overrides the config");
    app.add_option("--out", g.out_dir, "Output directory for run");
    app.add_flag("-q,--quiet", g.quiet, "Suppress progress messages");

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate an ARCH(1) price path or a synthetic trade stream");
    add_io(simulate, sim.io, false);
    simulate->add_option("--alpha0", sim.arch.alpha0, "ARCH constant")->capture_default_str();
    simulate->add_option("--alpha1", sim.arch.alpha1, "ARCH feedback")->capture_default_str();
    simulate->add_option("--n", sim.arch.n, "Number of returns")->capture_default_str();
    simulate->add_option("--burn-in", sim.arch.burn_in, "Discarded warm-up steps")->capture_default_str();
    simulate->add_option("--init-price", sim.arch.init_price, "Starting price")->capture_default_str();
    simulate->add_option("--tick", sim.tick, "Absolute tick size, 0 for none")->capture_default_str();
    simulate->add_flag("--trades", sim.trades, "Emit a trade stream instead of an ARCH path");
    simulate->add_option("--sessions", sim.synth.sessions, "Trade sessions")->capture_default_str();
    simulate->add_option("--session-seconds", sim.synth.session_seconds, "Session length")->capture_default_str();
    simulate->add_option("--rate", sim.synth.rate, "Mean trades per second")->capture_default_str();
    simulate->add_option("--rate-process", sim.rate_process, "constant, poisson or doubly_stochastic")
        ->capture_default_str();
    simulate->add_option("--return-process", sim.return_process, "iid or arch")->capture_default_str();
    simulate->add_option("--return-sd", sim.synth.return_sd, "Per-trade return sd (iid)")->capture_default_str();
    simulate->add_option("--arch-block", sim.synth.arch_block, "Trades sharing one ARCH variance")
        ->capture_default_str();
    simulate->add_option("--symbol", sim.symbol, "Symbol written to the trade file")->capture_default_str();

    DiscretizeOpts disc;
    auto* discretize_cmd = app.add_subcommand("discretize", "Coarse-grain a price column onto a tick grid");
    add_io(discretize_cmd, disc.io);
    discretize_cmd->add_option("--column", disc.column, "Price column")->capture_default_str();
    discretize_cmd->add_option("--tick", disc.tick, "Tick size")->required();

    EstimateOpts est;
    auto* estimate = app.add_subcommand("estimate", "Run one estimator on a numeric column");
    add_io(estimate, est.io);
    estimate->add_option("which", est.which, "ccdf, zero, hill, acf or dfa")
        ->required()
        ->check(CLI::IsMember({"ccdf", "zero", "hill", "acf", "dfa"}));
    estimate->add_option("--column", est.column, "Input column")->capture_default_str();
    estimate->add_flag("--prices", est.from_prices, "Column holds prices; difference it first");
    estimate->add_option("--transform", est.transform, "none, abs or square")->capture_default_str();
    estimate->add_option("--tail-fraction", est.tail_fraction, "Hill tail fraction")->capture_default_str();
    estimate->add_option("--max-lag", est.max_lag, "ACF lags")->capture_default_str();
    estimate->add_option("--points", est.points, "CCDF thresholds")->capture_default_str();
    estimate->add_option("--min-window", est.dfa.min_window, "Smallest DFA window")->capture_default_str();
    estimate->add_option("--max-window", est.dfa.max_window, "Largest DFA window, 0 for n/8")->capture_default_str();
    estimate->add_option("--windows", est.dfa.n_windows, "Number of DFA scales")->capture_default_str();

    ClockOpts clk;
    auto* clock = app.add_subcommand("clock", "Aggregate a trade file under a clock");
    add_io(clock, clk.io);
    clock->add_option("mode", clk.mode, "real, transaction or shuffled")
        ->required()
        ->check(CLI::IsMember({"real", "transaction", "shuffled"}));
    clock->add_option("--bin-seconds", clk.spec.bin_seconds, "Real-time bin width")->capture_default_str();
    clock->add_option("--n-per-bin", clk.n_per_bin, "Trades per transaction bin, 0 for auto")->capture_default_str();
    clock->add_option("--scope", clk.scope, "full_sample or per_session")->capture_default_str();
    clock->add_option("--session-open", clk.schema.session_open, "Session open HH:MM:SS")->capture_default_str();
    clock->add_option("--session-close", clk.schema.session_close, "Session close HH:MM:SS")->capture_default_str();
    clock->add_option("--timestamp-format", clk.timestamp_format, "auto, epoch or iso8601")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "epoch", "iso8601"}));
    clock->add_option("--utc-offset", clk.schema.utc_offset_seconds, "Seconds added to epoch timestamps")
        ->capture_default_str();

    TtestOpts tt;
    auto* ttest = app.add_subcommand("ttest", "One-sided paired t-test on instrument,before,after rows");
    add_io(ttest, tt.io);
    ttest->add_option("--alternative", tt.alternative, "less or greater")
        ->capture_default_str()
        ->check(CLI::IsMember({"less", "greater"}));
    ttest->add_option("--statistic", tt.statistic, "Label written to the output")->capture_default_str();

    std::string run_path;
    auto* run = app.add_subcommand("run", "Run a configured experiment and write its result bundle");
    run->add_option("config", run_path, "Experiment config (INI)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) run_simulate(g, sim);
        else if (*discretize_cmd) run_discretize(g, disc);
        else if (*estimate) run_estimate(g, est);
        else if (*clock) run_clock(g, clk);
        else if (*ttest) run_ttest(g, tt);
        else if (*run) run_config(g, run_path);
    } catch (const Error& e) {
        std::cerr << "tickdiff: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "tickdiff: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
