#include "tickdiff/config.hpp"

#include "tickdiff/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tickdiff {

namespace pt = boost::property_tree;

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::arch_sweep: return "arch_sweep";
    case ExperimentKind::distribution_compare: return "distribution_compare";
    case ExperimentKind::acf_compare: return "acf_compare";
    case ExperimentKind::subordination_compare: return "subordination_compare";
    case ExperimentKind::panel_test: return "panel_test";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text)
{
    if (text == "arch_sweep") return ExperimentKind::arch_sweep;
    if (text == "distribution_compare") return ExperimentKind::distribution_compare;
    if (text == "acf_compare") return ExperimentKind::acf_compare;
    if (text == "subordination_compare") return ExperimentKind::subordination_compare;
    if (text == "panel_test") return ExperimentKind::panel_test;
    throw ConfigError("unknown experiment kind '" + text + "'");
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"experiment", {"kind", "seed", "out"}},
        {"input", {"source", "path"}},
        {"csv",
         {"timestamp_col", "price_col", "size_col", "symbol_col", "timestamp_format", "utc_offset_seconds",
          "session_open", "session_close", "max_malformed_fraction"}},
        {"arch", {"alpha0", "alpha1", "n", "burn_in", "init_price"}},
        {"sweep", {"ticks", "max_lag", "seeds"}},
        {"synth",
         {"sessions", "session_seconds", "rate", "rate_process", "rate_step_seconds", "rate_persistence",
          "rate_log_sd", "return_process", "return_sd", "arch_alpha0", "arch_alpha1", "arch_block", "init_price",
          "tick"}},
        {"clock", {"bin_seconds", "shuffle_scope", "n_per_bin"}},
        {"estimators", {"tail_fraction", "max_lag", "dfa_min_window", "dfa_max_window", "dfa_windows", "ccdf_points"}},
        {"windows", {"before_tick", "after_tick", "split"}},
        {"panel", {"instruments", "lags", "alt_p0", "alt_alpha_h", "alt_rho", "alt_hurst"}},
    };
    return keys;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const
    {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        return v ? std::optional<std::string>(*v) : std::nullopt;
    }

    void get(const std::string& section, const std::string& key, std::string& out) const
    {
        if (auto v = raw(section, key)) out = *v;
    }

    void get(const std::string& section, const std::string& key, double& out) const
    {
        if (auto v = raw(section, key)) out = to_double(section, key, *v);
    }

    void get(const std::string& section, const std::string& key, std::size_t& out) const
    {
        if (auto v = raw(section, key)) out = static_cast<std::size_t>(to_u64(section, key, *v));
    }

    static double to_double(const std::string& section, const std::string& key, const std::string& text)
    {
        double v = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            throw ConfigError("[" + section + "] " + key + ": '" + text + "' is not a number");
        return v;
    }

    static std::uint64_t to_u64(const std::string& section, const std::string& key, const std::string& text)
    {
        std::uint64_t v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            throw ConfigError("[" + section + "] " + key + ": '" + text + "' is not a non-negative integer");
        return v;
    }

private:
    const pt::ptree& tree_;
};

template <typename Fn>
auto as_config_error(Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> parse_list(const std::string& section, const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(Reader::to_double(section, key, item.substr(b, e - b + 1)));
    }
    return out;
}

TimestampFormat parse_timestamp_format(const std::string& text)
{
    if (text == "auto") return TimestampFormat::automatic;
    if (text == "epoch") return TimestampFormat::epoch;
    if (text == "iso8601") return TimestampFormat::iso8601;
    throw ConfigError("timestamp_format must be auto, epoch or iso8601");
}

} // namespace

void ExperimentConfig::validate() const
{
    as_config_error([&] {
        arch.validate();
        clock.validate();
        synth.validate();
        CoarseGrainSweep sweep;
        sweep.deltas = tick_multiples;
        sweep.max_lag = sweep_max_lag;
        sweep.n_seeds = sweep_seeds;
        sweep.validate(arch.n);
    });
    if (source == InputSource::csv && csv_path.empty()) throw ConfigError("[input] path is required for csv input");
    if (!(estimators.tail_fraction > 0.0 && estimators.tail_fraction <= 0.2))
        throw ConfigError("[estimators] tail_fraction must lie in (0, 0.2]");
    if (estimators.max_lag < 1) throw ConfigError("[estimators] max_lag must be >= 1");
    if (!(windows.before_tick >= 0.0 && windows.after_tick >= 0.0))
        throw ConfigError("[windows] tick multiples must be >= 0");
    if (panel.instruments < 2) throw ConfigError("[panel] instruments must be >= 2 for a t-test");
    if (panel.lags < 1 || panel.lags > estimators.max_lag)
        throw ConfigError("[panel] lags must lie in [1, estimators.max_lag]");
    if (source == InputSource::csv && kind != ExperimentKind::subordination_compare &&
        kind != ExperimentKind::arch_sweep && windows.split.empty())
        throw ConfigError("[windows] split is required to separate before/after windows in csv input");
}

ExperimentConfig parse_config(std::istream& in, std::optional<std::uint64_t> seed_override)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    for (const auto& [section, child] : tree) {
        const auto sec = known_keys().find(section);
        if (sec == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
        if (!child.data().empty()) throw ConfigError("key '" + section + "' outside any section");
        for (const auto& [key, value] : child)
            if (!sec->second.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }

    const Reader r(tree);
    ExperimentConfig c;

    const auto kind = r.raw("experiment", "kind");
    if (!kind) throw ConfigError("[experiment] kind is required");
    c.kind = parse_experiment_kind(*kind);
    if (seed_override) {
        c.seed = *seed_override;
    } else if (auto seed = r.raw("experiment", "seed")) {
        c.seed = Reader::to_u64("experiment", "seed", *seed);
    } else {
        throw ConfigError("[experiment] seed is required (or pass --seed)");
    }
    r.get("experiment", "out", c.out_dir);

    if (auto src = r.raw("input", "source")) {
        if (*src == "synthetic") c.source = InputSource::synthetic;
        else if (*src == "csv") c.source = InputSource::csv;
        else throw ConfigError("[input] source must be synthetic or csv");
    }
    r.get("input", "path", c.csv_path);

    r.get("csv", "timestamp_col", c.schema.timestamp_col);
    r.get("csv", "price_col", c.schema.price_col);
    r.get("csv", "size_col", c.schema.size_col);
    r.get("csv", "symbol_col", c.schema.symbol_col);
    if (auto f = r.raw("csv", "timestamp_format")) c.schema.timestamp_format = parse_timestamp_format(*f);
    r.get("csv", "utc_offset_seconds", c.schema.utc_offset_seconds);
    r.get("csv", "session_open", c.schema.session_open);
    r.get("csv", "session_close", c.schema.session_close);
    r.get("csv", "max_malformed_fraction", c.schema.max_malformed_fraction);

    r.get("arch", "alpha0", c.arch.alpha0);
    r.get("arch", "alpha1", c.arch.alpha1);
    r.get("arch", "n", c.arch.n);
    r.get("arch", "burn_in", c.arch.burn_in);
    r.get("arch", "init_price", c.arch.init_price);

    if (auto t = r.raw("sweep", "ticks")) c.tick_multiples = parse_list("sweep", "ticks", *t);
    r.get("sweep", "max_lag", c.sweep_max_lag);
    r.get("sweep", "seeds", c.sweep_seeds);

    auto& s = c.synth;
    r.get("synth", "sessions", s.sessions);
    r.get("synth", "session_seconds", s.session_seconds);
    r.get("synth", "rate", s.rate);
    if (auto v = r.raw("synth", "rate_process")) s.rate_process = as_config_error([&] { return parse_rate_process(*v); });
    r.get("synth", "rate_step_seconds", s.rate_step_seconds);
    r.get("synth", "rate_persistence", s.rate_persistence);
    r.get("synth", "rate_log_sd", s.rate_log_sd);
    if (auto v = r.raw("synth", "return_process"))
        s.return_process = as_config_error([&] { return parse_return_process(*v); });
    r.get("synth", "return_sd", s.return_sd);
    r.get("synth", "arch_alpha0", s.arch_alpha0);
    r.get("synth", "arch_alpha1", s.arch_alpha1);
    r.get("synth", "arch_block", s.arch_block);
    r.get("synth", "init_price", s.init_price);
    r.get("synth", "tick", s.tick);

    r.get("clock", "bin_seconds", c.clock.bin_seconds);
    if (auto v = r.raw("clock", "shuffle_scope"))
        c.clock.shuffle_scope = as_config_error([&] { return parse_shuffle_scope(*v); });
    if (auto v = r.raw("clock", "n_per_bin"); v && *v != "auto")
        c.clock.n_per_bin = static_cast<std::size_t>(Reader::to_u64("clock", "n_per_bin", *v));

    r.get("estimators", "tail_fraction", c.estimators.tail_fraction);
    r.get("estimators", "max_lag", c.estimators.max_lag);
    r.get("estimators", "dfa_min_window", c.estimators.dfa.min_window);
    r.get("estimators", "dfa_max_window", c.estimators.dfa.max_window);
    r.get("estimators", "dfa_windows", c.estimators.dfa.n_windows);
    r.get("estimators", "ccdf_points", c.estimators.ccdf_points);

    r.get("windows", "before_tick", c.windows.before_tick);
    r.get("windows", "after_tick", c.windows.after_tick);
    r.get("windows", "split", c.windows.split);

    r.get("panel", "instruments", c.panel.instruments);
    r.get("panel", "lags", c.panel.lags);
    const auto alt = [&](const char* key, Alternative& out) {
        if (auto v = r.raw("panel", key)) out = as_config_error([&] { return parse_alternative(*v); });
    };
    alt("alt_p0", c.panel.alt_p0);
    alt("alt_alpha_h", c.panel.alt_alpha_h);
    alt("alt_rho", c.panel.alt_rho);
    alt("alt_hurst", c.panel.alt_hurst);

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in, seed_override);
}

} // namespace tickdiff
