#include "tickdiff/config.hpp"
#include "tickdiff/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace tickdiff;

namespace {

ExperimentConfig parse(const std::string& text, std::optional<std::uint64_t> seed = std::nullopt)
{
    std::istringstream in(text);
    return parse_config(in, seed);
}

} // namespace

TEST_CASE("minimal config takes defaults")
{
    const auto c = parse("[experiment]\nkind = arch_sweep\nseed = 42\n");
    CHECK(c.kind == ExperimentKind::arch_sweep);
    CHECK(c.seed == 42);
    CHECK(c.arch.alpha0 == 0.1);
    CHECK(c.arch.alpha1 == 0.9);
    CHECK(c.arch.n == 65536);
    CHECK(c.clock.bin_seconds == 900.0);
    CHECK(c.tick_multiples == std::vector<double>{0.0, 0.25, 0.5, 1.0, 2.0});
    CHECK(c.estimators.tail_fraction == 0.05);
    CHECK(c.out_dir == "results");
}

TEST_CASE("every section is read")
{
    const auto c = parse(R"([experiment]
kind = subordination_compare
seed = 7
out = outdir

[arch]
alpha0 = 0.2
alpha1 = 0.5
n = 1024

[sweep]
ticks = 0, 1.5, 3
max_lag = 4
seeds = 3

[synth]
sessions = 4
rate = 0.3
rate_process = doubly_stochastic
return_process = arch
arch_block = 60

[clock]
bin_seconds = 300
shuffle_scope = per_session
n_per_bin = 90

[estimators]
tail_fraction = 0.1
max_lag = 6
dfa_min_window = 8

[panel]
instruments = 6
lags = 3
alt_p0 = greater
)");
    CHECK(c.kind == ExperimentKind::subordination_compare);
    CHECK(c.out_dir == "outdir");
    CHECK(c.arch.alpha1 == 0.5);
    CHECK(c.arch.n == 1024);
    CHECK(c.tick_multiples == std::vector<double>{0.0, 1.5, 3.0});
    CHECK(c.sweep_seeds == 3);
    CHECK(c.synth.sessions == 4);
    CHECK(c.synth.rate_process == RateProcess::doubly_stochastic);
    CHECK(c.synth.return_process == ReturnProcess::arch);
    CHECK(c.synth.arch_block == 60);
    CHECK(c.clock.bin_seconds == 300.0);
    CHECK(c.clock.shuffle_scope == ShuffleScope::per_session);
    CHECK(c.clock.n_per_bin == std::optional<std::size_t>(90));
    CHECK(c.estimators.tail_fraction == 0.1);
    CHECK(c.estimators.dfa.min_window == 8);
    CHECK(c.panel.instruments == 6);
    CHECK(c.panel.alt_p0 == Alternative::greater);
}

TEST_CASE("seed is mandatory unless overridden")
{
    CHECK_THROWS_AS(parse("[experiment]\nkind = arch_sweep\n"), ConfigError);
    CHECK(parse("[experiment]\nkind = arch_sweep\n", 9).seed == 9);
    CHECK(parse("[experiment]\nkind = arch_sweep\nseed = 1\n", 9).seed == 9);
}

TEST_CASE("invalid configs are config errors")
{
    const std::string head = "[experiment]\nkind = arch_sweep\nseed = 1\n";
    CHECK_THROWS_AS(parse("[experiment]\nkind = figure9\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[arch]\nalpha1 = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[arch]\nalpha1 = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[arch]\ngamma = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[plots]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[clock]\nshuffle_scope = weekly\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[estimators]\ntail_fraction = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[sweep]\nticks = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse(head + "[input]\nsource = csv\n"), ConfigError);
    CHECK_THROWS_AS(parse("[experiment]\nkind = panel_test\nseed = 1\n[input]\nsource = csv\npath = x.csv\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse(head + "[panel]\ninstruments = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent.ini"), ConfigError);
    try {
        parse(head + "[arch]\nalpha1 = 2\n");
    } catch (const Error& e) {
        CHECK(e.exit_code() == 2);
    }
}
