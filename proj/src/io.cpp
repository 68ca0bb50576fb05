#include "tickdiff/io.hpp"

#include "tickdiff/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>

namespace tickdiff {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view text, double& out)
{
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_int(std::string_view text, long long& out)
{
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.emplace_back(trim(cur));
    return fields;
}

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing CSV column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const
{
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const
{
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double v = 0.0;
        if (c >= rows[i].size() || !parse_double(rows[i][c], v))
            throw MalformedDataError("row " + std::to_string(i + 2) + ": column '" + std::string(name) +
                                     "' is not a finite number");
        out.push_back(v);
    }
    return out;
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (!have_header) {
            // Strip a UTF-8 byte-order mark.
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
            table.header = split_csv_line(line);
            have_header = true;
            continue;
        }
        table.rows.push_back(split_csv_line(line));
    }
    if (!have_header) throw SchemaError("CSV input has no header row");
    return table;
}

CsvTable read_csv_file(const std::string& path)
{
    if (path == "-") return read_csv(std::cin);
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    return read_csv(in);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double v)
{
    return cell(std::string_view(format_double(v)));
}

CsvWriter& CsvWriter::cell(std::size_t v)
{
    return cell(std::string_view(std::to_string(v)));
}

CsvWriter& CsvWriter::cell(long long v)
{
    return cell(std::string_view(std::to_string(v)));
}

CsvWriter& CsvWriter::cell(std::string_view v)
{
    if (filled_++) out_ << ',';
    if (v.find_first_of(",\"\n") != std::string_view::npos) {
        out_ << '"';
        for (char c : v) out_ << (c == '"' ? "\"\"" : std::string(1, c));
        out_ << '"';
    } else {
        out_ << v;
    }
    return *this;
}

void CsvWriter::end_row()
{
    if (filled_ != columns_)
        throw ConsistencyError("CSV row has " + std::to_string(filled_) + " cells, header has " +
                               std::to_string(columns_));
    out_ << '\n';
    filled_ = 0;
}

double parse_time_of_day(std::string_view text)
{
    text = trim(text);
    long long h = 0, m = 0;
    double s = 0.0;
    if (text.size() < 5 || text[2] != ':' || !parse_int(text.substr(0, 2), h) || !parse_int(text.substr(3, 2), m))
        throw ParameterError("bad time of day '" + std::string(text) + "'");
    if (text.size() > 5) {
        if (text[5] != ':' || !parse_double(text.substr(6), s))
            throw ParameterError("bad time of day '" + std::string(text) + "'");
    }
    if (h < 0 || h > 24 || m < 0 || m > 59 || s < 0.0 || s >= 61.0)
        throw ParameterError("time of day out of range '" + std::string(text) + "'");
    return static_cast<double>(h * 3600 + m * 60) + s;
}

namespace {

bool parse_iso(std::string_view text, ParsedTimestamp& out)
{
    // YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+hh:mm|-hh:mm]
    if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' '))
        return false;
    long long y = 0, mo = 0, d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) || !parse_int(text.substr(8, 2), d))
        return false;
    using namespace std::chrono;
    const year_month_day ymd{year{static_cast<int>(y)}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;

    std::string_view clock = text.substr(11);
    if (!clock.empty() && clock.back() == 'Z') clock.remove_suffix(1);
    const auto zone = clock.find_first_of("+-");
    if (zone != std::string_view::npos) clock = clock.substr(0, zone);
    try {
        out.seconds = parse_time_of_day(clock);
    } catch (const ParameterError&) {
        return false;
    }
    out.day = sys_days{ymd}.time_since_epoch().count();
    return true;
}

bool parse_epoch(std::string_view text, double utc_offset, ParsedTimestamp& out)
{
    double t = 0.0;
    if (!parse_double(text, t)) return false;
    t += utc_offset;
    const double day = std::floor(t / 86400.0);
    out.day = static_cast<long long>(day);
    out.seconds = t - day * 86400.0;
    return true;
}

} // namespace

ParsedTimestamp parse_timestamp(std::string_view text, TimestampFormat format, double utc_offset_seconds)
{
    text = trim(text);
    ParsedTimestamp ts;
    bool ok = false;
    switch (format) {
    case TimestampFormat::epoch: ok = parse_epoch(text, utc_offset_seconds, ts); break;
    case TimestampFormat::iso8601: ok = parse_iso(text, ts); break;
    case TimestampFormat::automatic:
        ok = parse_iso(text, ts) || parse_epoch(text, utc_offset_seconds, ts);
        break;
    }
    if (!ok) throw ParameterError("unparseable timestamp '" + std::string(text) + "'");
    return ts;
}

std::string iso_date(long long day)
{
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{day}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string iso_timestamp(long long day, double seconds_of_day)
{
    auto whole = static_cast<long long>(std::floor(seconds_of_day));
    auto micros = std::llround((seconds_of_day - static_cast<double>(whole)) * 1e6);
    if (micros == 1000000) {
        ++whole;
        micros = 0;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lld.%06lld", iso_date(day).c_str(), whole / 3600,
                  (whole / 60) % 60, whole % 60, micros);
    return buf;
}

TradeData load_trades(std::istream& in, const TradeCsvSchema& schema)
{
    const double open = parse_time_of_day(schema.session_open);
    const double close = parse_time_of_day(schema.session_close);
    if (!(close > open)) throw ConfigError("session close must follow session open");

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw SchemaError("trade file has no header row");
    const auto find = [&](const std::string& name) -> std::ptrdiff_t {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : it - header.begin();
    };
    const std::ptrdiff_t ts_col = find(schema.timestamp_col);
    const std::ptrdiff_t px_col = find(schema.price_col);
    if (ts_col < 0 || px_col < 0)
        throw SchemaError("trade file header lacks mandatory column '" +
                          (ts_col < 0 ? schema.timestamp_col : schema.price_col) + "'");
    const std::ptrdiff_t size_col = schema.size_col.empty() ? -1 : find(schema.size_col);
    const std::ptrdiff_t sym_col = schema.symbol_col.empty() ? -1 : find(schema.symbol_col);

    TradeData data;
    LoadReport& rep = data.report;
    // (symbol, day) -> trades in file order
    std::map<std::pair<std::string, long long>, std::vector<TradeRecord>> grouped;
    const auto malformed = [&](const std::string& why) {
        ++rep.malformed;
        rep.diagnostics.push_back("line " + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++rep.rows;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            malformed("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
            continue;
        }
        ParsedTimestamp ts;
        try {
            ts = parse_timestamp(fields[static_cast<std::size_t>(ts_col)], schema.timestamp_format,
                                 schema.utc_offset_seconds);
        } catch (const ParameterError& e) {
            malformed(e.what());
            continue;
        }
        double price = 0.0;
        if (!parse_double(fields[static_cast<std::size_t>(px_col)], price)) {
            malformed("price '" + fields[static_cast<std::size_t>(px_col)] + "' is not a number");
            continue;
        }
        long long size = 0;
        if (size_col >= 0) {
            const std::string& f = fields[static_cast<std::size_t>(size_col)];
            if (!f.empty() && (!parse_int(trim(f), size) || size < 0)) {
                malformed("size '" + f + "' is not a non-negative integer");
                continue;
            }
        }
        if (!(price > 0.0)) {
            ++rep.rejected_price;
            rep.warnings.push_back("line " + std::to_string(line_no) + ": non-positive price rejected");
            continue;
        }
        if (ts.seconds < open || ts.seconds > close) {
            ++rep.outside_session;
            continue;
        }
        const std::string symbol = sym_col >= 0 ? fields[static_cast<std::size_t>(sym_col)] : std::string("ALL");
        grouped[{symbol, ts.day}].push_back({ts.seconds - open, price, size});
        ++rep.accepted;
    }

    if (rep.rows > 0 &&
        static_cast<double>(rep.malformed) > schema.max_malformed_fraction * static_cast<double>(rep.rows)) {
        std::string msg = std::to_string(rep.malformed) + " of " + std::to_string(rep.rows) +
                          " rows are malformed (limit " + format_double(100.0 * schema.max_malformed_fraction) + "%)";
        for (std::size_t i = 0; i < rep.diagnostics.size() && i < 10; ++i) msg += "\n  " + rep.diagnostics[i];
        throw MalformedDataError(msg);
    }

    for (auto& [key, trades] : grouped) {
        const auto by_time = [](const TradeRecord& a, const TradeRecord& b) { return a.timestamp < b.timestamp; };
        if (!std::is_sorted(trades.begin(), trades.end(), by_time)) {
            std::stable_sort(trades.begin(), trades.end(), by_time);
            ++rep.reordered_sessions;
            rep.warnings.push_back(key.first + " " + iso_date(key.second) +
                                   ": out-of-order timestamps, stable-sorted");
        }
        data.instruments[key.first].push_back({iso_date(key.second), close - open, std::move(trades)});
    }
    return data;
}

TradeData load_trades_csv(const std::string& path, const TradeCsvSchema& schema)
{
    if (path == "-") return load_trades(std::cin, schema);
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open trade file '" + path + "'");
    return load_trades(in, schema);
}

void write_trades_csv(std::ostream& out, const std::string& symbol, const std::vector<Session>& sessions,
                      long long first_day, const std::string& session_open)
{
    const double open = parse_time_of_day(session_open);
    CsvWriter w(out, {"symbol", "timestamp", "price", "size"});
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        for (const auto& t : sessions[s].trades) {
            w.cell(std::string_view(symbol))
                .cell(std::string_view(iso_timestamp(first_day + static_cast<long long>(s), open + t.timestamp)))
                .cell(t.price)
                .cell(static_cast<long long>(t.size));
            w.end_row();
        }
    }
}

} // namespace tickdiff
