// io.hpp: CSV tables and trade-file ingestion.
//
// Output CSV is UTF-8, comma-delimited, '.' decimal point, always headered.
// Doubles are written in shortest round-trip form so reruns are byte-identical.
#pragma once

#include "tickdiff/clocks.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tickdiff {

std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws SchemaError when the column is absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;
};

/// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

CsvTable read_csv(std::istream& in);
/// "-" reads standard input.
CsvTable read_csv_file(const std::string& path);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::size_t v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(std::string_view v);
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

enum class TimestampFormat { automatic, epoch, iso8601 };

struct TradeCsvSchema {
    std::string timestamp_col = "timestamp";
    std::string price_col = "price";
    std::string size_col = "size";       // optional column
    std::string symbol_col = "symbol";   // optional column
    TimestampFormat timestamp_format = TimestampFormat::automatic;
    /// Shift applied to epoch timestamps to reach exchange-local wall clock.
    double utc_offset_seconds = 0.0;
    std::string session_open = "09:30:00";
    std::string session_close = "16:00:00";
    double max_malformed_fraction = 0.01;
};

/// Seconds since midnight for "HH:MM[:SS[.fff]]".
double parse_time_of_day(std::string_view text);

struct ParsedTimestamp {
    long long day = 0;        // days since 1970-01-01
    double seconds = 0.0;     // seconds since local midnight
};

/// Epoch seconds or ISO-8601 "YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+hh:mm]". An ISO
/// zone suffix is accepted and the wall-clock reading kept as-is.
ParsedTimestamp parse_timestamp(std::string_view text, TimestampFormat format, double utc_offset_seconds = 0.0);

std::string iso_date(long long day);

struct LoadReport {
    std::size_t rows = 0;
    std::size_t accepted = 0;
    std::size_t malformed = 0;
    std::size_t rejected_price = 0;
    std::size_t outside_session = 0;
    std::size_t reordered_sessions = 0;
    std::vector<std::string> diagnostics;
    std::vector<std::string> warnings;
};

struct TradeData {
    /// Sessions per instrument, each session one trading date, sorted by date.
    std::map<std::string, std::vector<Session>> instruments;
    LoadReport report;
};

TradeData load_trades(std::istream& in, const TradeCsvSchema& schema);
TradeData load_trades_csv(const std::string& path, const TradeCsvSchema& schema);

/// Writes symbol,timestamp,price,size rows with ISO-8601 timestamps that
/// load_trades reads back under the default schema: session i is dated
/// first_day + i and its clock starts at session_open.
void write_trades_csv(std::ostream& out, const std::string& symbol, const std::vector<Session>& sessions,
                      long long first_day, const std::string& session_open = "09:30:00");

std::string iso_timestamp(long long day, double seconds_of_day);

} // namespace tickdiff
