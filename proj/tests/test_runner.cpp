#include "tickdiff/config.hpp"
#include "tickdiff/errors.hpp"
#include "tickdiff/io.hpp"
#include "tickdiff/runner.hpp"
#include "tickdiff/synth.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace tickdiff;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("tickdiff_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallSweep = R"([experiment]
kind = arch_sweep
seed = 11
[arch]
n = 4096
[sweep]
seeds = 4
)";

const char* kSmallPanel = R"([experiment]
kind = panel_test
seed = 5
[arch]
n = 8192
[panel]
instruments = 4
lags = 2
)";

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(TICKDIFF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("arch sweep bundle contents")
{
    const auto b = run_experiment(parse(kSmallSweep));
    CHECK(b.files.count("arch_acf.csv") == 1);
    CHECK(b.files.count("arch_zero_frequency.csv") == 1);
    CHECK(b.files.count("arch_squared_baseline.csv") == 1);
    CHECK(b.files.count("manifest.json") == 1);
    CHECK(b.files.at("arch_acf.csv").rfind("delta,delta_sd,lag,acf,stderr,valid_replicates,degenerate\n", 0) == 0);

    const auto& m = b.manifest;
    CHECK(m["tool"] == "tickdiff");
    CHECK(m["seed"] == 11);
    CHECK(m["experiment"] == "arch_sweep");
    CHECK(m["settings"]["arch"]["alpha1"] == 0.9);
    CHECK(m["settings"]["rng"] == "mt19937_64/marsaglia-polar/v1");
    CHECK(m["outputs"].size() == 3);
    CHECK(m["summary"].contains("baseline_check_passed"));
    CHECK(m["summary"]["zero_frequency"].size() == 5);
    CHECK(m["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("reruns are byte-identical and seeds matter")
{
    const auto a = run_experiment(parse(kSmallSweep));
    const auto b = run_experiment(parse(kSmallSweep));
    CHECK(a.files == b.files);

    std::istringstream in(kSmallSweep);
    const auto c = run_experiment(parse_config(in, 12));
    CHECK(c.files.at("arch_acf.csv") != a.files.at("arch_acf.csv"));
    CHECK(c.manifest["config_hash"] != a.manifest["config_hash"]);
}

TEST_CASE("panel test on synthetic regimes")
{
    const auto b = run_experiment(parse(kSmallPanel));
    CHECK(b.files.count("panel_values.csv") == 1);
    CHECK(b.files.count("ttest.csv") == 1);
    const auto& t = b.manifest["summary"]["ttests"];
    REQUIRE(t.size() == 5);
    CHECK(t[0]["statistic"] == "p0");
    CHECK(t[0]["alternative"] == "less");
    CHECK(t[0]["p_value"].get<double>() < 0.01);
    CHECK(t[2]["statistic"] == "rho");
    CHECK(t[2]["lag"] == 1);
}

TEST_CASE("distribution and acf comparisons")
{
    const auto d = run_experiment(parse(R"([experiment]
kind = distribution_compare
seed = 3
[arch]
n = 8192
[panel]
instruments = 2
)"));
    CHECK(d.files.count("ccdf.csv") == 1);
    CHECK(d.manifest["summary"]["INST01"]["after"]["p0"].get<double>() <
          d.manifest["summary"]["INST01"]["before"]["p0"].get<double>());

    const auto a = run_experiment(parse(R"([experiment]
kind = acf_compare
seed = 3
[arch]
n = 8192
[panel]
instruments = 2
)"));
    CHECK(a.files.count("acf.csv") == 1);
    CHECK(a.files.count("dfa.csv") == 1);
    CHECK(a.files.count("hurst.csv") == 1);
}

TEST_CASE("subordination comparison on a clustered constant-rate stream")
{
    const auto b = run_experiment(parse(R"([experiment]
kind = subordination_compare
seed = 4
[synth]
sessions = 200
rate = 0.2
return_process = arch
arch_alpha1 = 0.7
arch_block = 180
)"));
    const auto& s = b.manifest["summary"]["SYNTH"];
    CHECK(s["n_per_bin"] == 180);
    const double real = s["real_time"]["acf"][0];
    const double trans = s["transaction_time"]["acf"][0];
    const double shuffled = s["shuffled_transaction_time"]["acf"][0];
    CHECK(std::abs(trans - real) <= 0.2 * real);
    CHECK(shuffled < 0.05);
}

TEST_CASE("csv-driven experiments")
{
    const fs::path dir = scratch("csv_input");
    fs::create_directories(dir);
    SynthTradeParams p;
    p.sessions = 20;
    p.rate = 0.2;
    p.rate_process = RateProcess::poisson;
    p.return_process = ReturnProcess::arch;
    p.arch_alpha0 = 1e-6;
    p.seed = 6;
    {
        std::ofstream f(dir / "trades.csv");
        write_trades_csv(f, "AAA", synth_trades(p), 19723);
        p.seed = 7;
        const auto more = synth_trades(p);
        std::ostringstream extra;
        write_trades_csv(extra, "BBB", more, 19723);
        const std::string body = extra.str();
        f << body.substr(body.find('\n') + 1);
    }
    const auto b = run_experiment(parse("[experiment]\nkind = subordination_compare\nseed = 1\n[input]\nsource = csv\n"
                                        "path = " + (dir / "trades.csv").string() + "\n"));
    CHECK(b.manifest["summary"].contains("AAA"));
    CHECK(b.manifest["summary"].contains("BBB"));

    CHECK_THROWS_AS(run_experiment(parse("[experiment]\nkind = subordination_compare\nseed = 1\n[input]\n"
                                         "source = csv\npath = " + (dir / "missing.csv").string() + "\n")),
                    ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("stage errors keep the exit code and name the stage")
{
    try {
        run_experiment(parse(R"([experiment]
kind = panel_test
seed = 1
[arch]
n = 64
[panel]
instruments = 2
lags = 1
)"));
        FAIL("expected an error");
    } catch (const StageError& e) {
        CHECK(e.exit_code() == 3);
        CHECK(std::string(e.what()).find("stage 'estimate INST01") != std::string::npos);
    }
}

TEST_CASE("bundles are written atomically")
{
    const fs::path out = scratch("bundle");
    const auto b = run_experiment(parse(kSmallSweep));
    write_bundle(b, out);
    for (const auto& [name, contents] : b.files) CHECK(slurp(out / name) == contents);
    CHECK_FALSE(fs::exists(out / ".tickdiff-staging"));

    // A directory squatting on an output name makes the commit fail.
    const fs::path blocked = scratch("blocked");
    fs::create_directories(blocked / "manifest.json" / "x");
    CHECK_THROWS(write_bundle(b, blocked));
    CHECK_FALSE(fs::exists(blocked / ".tickdiff-staging"));
    CHECK_FALSE(fs::exists(blocked / "arch_acf.csv"));
    fs::remove_all(out);
    fs::remove_all(blocked);
}

TEST_CASE("command line exit codes")
{
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    const std::string d = dir.string();
    {
        std::ofstream(dir / "sweep.ini") << kSmallSweep;
        std::ofstream(dir / "bad.ini") << "[experiment]\nkind = arch_sweep\nseed = 1\n[arch]\nalpha1 = 1.5\n";
        std::ofstream f(dir / "flat.csv");
        f << "return\n";
        for (int i = 0; i < 100; ++i) f << "0.5\n";
    }
    CHECK(run_cli("run " + d + "/sweep.ini --out " + d + "/out --quiet") == 0);
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    CHECK(run_cli("--config " + d + "/sweep.ini --seed 3 --out " + d + "/out2 run") == 0);
    CHECK(run_cli("run " + d + "/bad.ini") == 2);
    CHECK(run_cli("run " + d + "/missing.ini") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("estimate acf -i " + d + "/flat.csv") == 4);
    CHECK(run_cli("estimate hill -i " + d + "/missing.csv") == 3);
    CHECK(run_cli("simulate --n 2000 --seed 4 -o " + d + "/sim.csv") == 0);
    CHECK(run_cli("estimate dfa --column price --prices -i " + d + "/sim.csv -o " + d + "/dfa.csv") == 0);
    CHECK(run_cli("discretize --tick 0.5 -i " + d + "/sim.csv -o " + d + "/disc.csv") == 0);
    CHECK(run_cli("discretize --tick 0 -i " + d + "/sim.csv") == 2);
    CHECK(run_cli("estimate zero --column observed_price --prices -i " + d + "/disc.csv -o " + d + "/p0.csv") == 0);
    CHECK(slurp(dir / "p0.csv").rfind("n,p0\n2000,", 0) == 0);
    CHECK(run_cli("simulate --trades --sessions 3 --rate 0.1 --rate-process poisson -o " + d + "/trades.csv") == 0);
    CHECK(run_cli("clock shuffled --seed 2 -i " + d + "/trades.csv -o " + d + "/bins.csv") == 0);
    CHECK(slurp(dir / "bins.csv").rfind("symbol,session,bin,bin_start,bin_end,trades,return\n", 0) == 0);
    {
        std::ofstream(dir / "panel.csv") << "instrument,before,after\nA,0.1,0.4\nB,0.2,0.55\nC,0.3,0.55\n";
    }
    CHECK(run_cli("ttest --alternative greater -i " + d + "/panel.csv -o " + d + "/t.csv") == 0);
    CHECK(slurp(dir / "t.csv").find(",greater\n") != std::string::npos);
    fs::remove_all(dir);
}
