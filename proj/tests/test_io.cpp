#include "tickdiff/errors.hpp"
#include "tickdiff/io.hpp"
#include "tickdiff/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace tickdiff;

namespace {

TradeData load(const std::string& text, const TradeCsvSchema& schema = {})
{
    std::istringstream in(text);
    return load_trades(in, schema);
}

} // namespace

TEST_CASE("doubles are written in shortest round-trip form")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("csv lines split on commas outside quotes")
{
    CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_csv_line("\"x,y\",\"he said \"\"hi\"\"\"") == std::vector<std::string>{"x,y", "he said \"hi\""});
    CHECK(split_csv_line("a,b\r") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("csv writer and reader round-trip")
{
    std::ostringstream out;
    {
        CsvWriter w(out, {"k", "value", "name"});
        w.cell(std::size_t{1}).cell(0.25).cell("a").end_row();
        w.cell(std::size_t{2}).cell(-3.0).cell("b,c").end_row();
    }
    CHECK(out.str() == "k,value,name\n1,0.25,a\n2,-3,\"b,c\"\n");
    std::istringstream in(out.str());
    const CsvTable t = read_csv(in);
    CHECK(t.header == std::vector<std::string>{"k", "value", "name"});
    CHECK(t.numeric_column("value") == std::vector<double>{0.25, -3.0});
    CHECK(t.rows[1][2] == "b,c");
    CHECK_THROWS_AS(t.column("missing"), SchemaError);
    CHECK_FALSE(t.has_column("missing"));

    std::ostringstream bad;
    CsvWriter w(bad, {"a", "b"});
    w.cell(1.0);
    CHECK_THROWS_AS(w.end_row(), ConsistencyError);
}

TEST_CASE("non-numeric cells are data errors")
{
    std::istringstream in("x\n1\nabc\n");
    CHECK_THROWS_AS(read_csv(in).numeric_column("x"), MalformedDataError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), SchemaError);
}

TEST_CASE("timestamps")
{
    CHECK(parse_time_of_day("09:30") == 34200.0);
    CHECK(parse_time_of_day("16:00:00.5") == 57600.5);
    CHECK_THROWS_AS(parse_time_of_day("25:00"), ParameterError);

    const auto iso = parse_timestamp("2024-03-05T10:15:30.250", TimestampFormat::automatic);
    CHECK(iso_date(iso.day) == "2024-03-05");
    CHECK(iso.seconds == doctest::Approx(36930.25));

    const auto zoned = parse_timestamp("2024-03-05 10:15:30-05:00", TimestampFormat::iso8601);
    CHECK(zoned.seconds == 36930.0);
    CHECK(parse_timestamp("2024-03-05T10:15:30Z", TimestampFormat::iso8601).seconds == 36930.0);

    // 2024-03-05 15:15:30 UTC, shifted to UTC-5 wall clock.
    const auto epoch = parse_timestamp("1709651730", TimestampFormat::epoch, -5 * 3600.0);
    CHECK(iso_date(epoch.day) == "2024-03-05");
    CHECK(epoch.seconds == doctest::Approx(36930.0));

    CHECK_THROWS_AS(parse_timestamp("yesterday", TimestampFormat::automatic), ParameterError);
    CHECK_THROWS_AS(parse_timestamp("2024-02-30T10:00:00", TimestampFormat::iso8601), ParameterError);

    CHECK(iso_timestamp(iso.day, 36930.25) == "2024-03-05T10:15:30.250000");
    CHECK(iso_timestamp(0, 59.9999999) == "1970-01-01T00:01:00.000000");
}

TEST_CASE("well-formed file loads every row")
{
    const auto d = load("timestamp,price,size\n"
                        "2024-01-02T09:30:01,10.00,100\n"
                        "2024-01-02T09:30:02,10.01,200\n"
                        "2024-01-02T09:30:05,10.02,50\n");
    CHECK(d.report.rows == 3);
    CHECK(d.report.accepted == 3);
    CHECK(d.report.malformed == 0);
    CHECK(d.report.rejected_price == 0);
    REQUIRE(d.instruments.count("ALL") == 1);
    const auto& s = d.instruments.at("ALL");
    REQUIRE(s.size() == 1);
    CHECK(s[0].label == "2024-01-02");
    CHECK(s[0].length_seconds == 23400.0);
    REQUIRE(s[0].trades.size() == 3);
    CHECK(s[0].trades[0].timestamp == 1.0);
    CHECK(s[0].trades[1].size == 200);
}

TEST_CASE("a non-positive price is rejected and loading continues")
{
    const auto d = load("timestamp,price\n"
                        "2024-01-02T10:00:00,10.0\n"
                        "2024-01-02T10:00:01,-1.0\n"
                        "2024-01-02T10:00:02,10.5\n");
    CHECK(d.report.rejected_price == 1);
    CHECK(d.report.malformed == 0);
    CHECK(d.report.accepted == 2);
    CHECK(d.report.warnings.size() == 1);
}

TEST_CASE("out-of-order timestamps are stable-sorted with a warning")
{
    const auto d = load("timestamp,price\n"
                        "2024-01-02T10:00:05,1\n"
                        "2024-01-02T10:00:01,2\n"
                        "2024-01-02T10:00:05,3\n"
                        "2024-01-02T10:00:03,4\n");
    CHECK(d.report.reordered_sessions == 1);
    REQUIRE_FALSE(d.report.warnings.empty());
    const auto& t = d.instruments.at("ALL")[0].trades;
    CHECK(t[0].price == 2);
    CHECK(t[1].price == 4);
    CHECK(t[2].price == 1);
    CHECK(t[3].price == 3);
}

TEST_CASE("too many malformed rows abort with diagnostics")
{
    std::string text = "timestamp,price\n";
    for (int i = 0; i < 98; ++i) text += "2024-01-02T10:00:00,10\n";
    text += "garbage,10\n2024-01-02T10:00:00,ten\n";
    try {
        load(text);
        FAIL("expected MalformedDataError");
    } catch (const MalformedDataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2 of 100") != std::string::npos);
        CHECK(msg.find("line 100") != std::string::npos);
        CHECK(e.exit_code() == 3);
    }

    std::string one_bad = "timestamp,price\n";
    for (int i = 0; i < 99; ++i) one_bad += "2024-01-02T10:00:00,10\n";
    one_bad += "2024-01-02T10:00:00\n";
    const auto d = load(one_bad);
    CHECK(d.report.malformed == 1);
    CHECK(d.report.accepted == 99);
}

TEST_CASE("header problems are schema errors")
{
    CHECK_THROWS_AS(load("time,price\n2024-01-02T10:00:00,1\n"), SchemaError);
    CHECK_THROWS_AS(load(""), SchemaError);
    CHECK_THROWS_AS(load_trades_csv("/nonexistent/trades.csv", {}), SchemaError);
}

TEST_CASE("trades are grouped by symbol and date and clipped to session hours")
{
    const auto d = load("symbol,timestamp,price\n"
                        "AAA,2024-01-02T09:00:00,1\n"
                        "AAA,2024-01-02T09:30:00,1\n"
                        "BBB,2024-01-02T12:00:00,2\n"
                        "AAA,2024-01-03T16:00:00,3\n"
                        "AAA,2024-01-03T16:00:01,3\n");
    CHECK(d.report.outside_session == 2);
    REQUIRE(d.instruments.size() == 2);
    const auto& a = d.instruments.at("AAA");
    REQUIRE(a.size() == 2);
    CHECK(a[0].label == "2024-01-02");
    CHECK(a[0].trades[0].timestamp == 0.0);
    CHECK(a[1].label == "2024-01-03");
    CHECK(a[1].trades[0].timestamp == 23400.0);
}

TEST_CASE("custom schema with epoch timestamps")
{
    TradeCsvSchema schema;
    schema.timestamp_col = "ts";
    schema.price_col = "px";
    schema.size_col = "";
    schema.symbol_col = "";
    schema.timestamp_format = TimestampFormat::epoch;
    schema.utc_offset_seconds = -5 * 3600.0;
    const auto d = load("ts,px\n1709651730,10\n1709651731.5,11\n", schema);
    const auto& t = d.instruments.at("ALL")[0].trades;
    CHECK(t[0].timestamp == doctest::Approx(36930.0 - 34200.0));
    CHECK(t[1].timestamp == doctest::Approx(36931.5 - 34200.0));
}

TEST_CASE("written trade files load back unchanged")
{
    SynthTradeParams p;
    p.sessions = 2;
    p.session_seconds = 23400.0;
    p.rate = 0.05;
    p.rate_process = RateProcess::poisson;
    p.seed = 9;
    const auto sessions = synth_trades(p);
    std::ostringstream out;
    write_trades_csv(out, "SYN", sessions, 19723);
    const auto d = load(out.str());
    const auto& back = d.instruments.at("SYN");
    REQUIRE(back.size() == 2);
    CHECK(back[0].label == "2024-01-01");
    for (std::size_t s = 0; s < 2; ++s) {
        REQUIRE(back[s].trades.size() == sessions[s].trades.size());
        for (std::size_t i = 0; i < back[s].trades.size(); ++i) {
            CHECK(std::abs(back[s].trades[i].timestamp - sessions[s].trades[i].timestamp) <= 1e-6);
            CHECK(back[s].trades[i].price == sessions[s].trades[i].price);
        }
    }
}
