#include "vsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace vsim::io {

namespace {

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Atomic whole-file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path, "cannot open for writing");
        out << content;
        if (!out.good()) throw IoError(path, "write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError(path, "rename failed: " + ec.message());
}

bool label_has_unit(std::string_view label, std::string_view unit) {
    if (label == unit) return true;
    if (label.size() <= unit.size()) return false;
    return label[label.size() - unit.size() - 1] == '_' &&
           label.substr(label.size() - unit.size()) == unit;
}

/// getline wrapper tolerating CRLF files.
bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_value(const std::string& text, const std::string& path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": bad numeric value '" + text +
                          "'");
    }
}

} // namespace

std::string format_iso8601(std::int64_t epoch_s) {
    const std::time_t t = static_cast<std::time_t>(epoch_s);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::int64_t parse_iso8601(const std::string& text) {
    std::tm tm{};
    int y, mo, d, h, mi, s;
    char z = '\0';
    if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d%c", &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
        z != 'Z') {
        throw ConfigError("timestamp '" + text + "' is not ISO-8601 UTC (expected ...Z)");
    }
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return static_cast<std::int64_t>(timegm(&tm));
}

CsvSeries load_timeseries_csv(const std::string& path, std::string_view expected_unit) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");

    std::string line;
    if (!read_line(in, line)) throw ConfigError(path + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "timestamp") {
        throw ConfigError(path + ": expected header 'timestamp,<label>_<unit>'");
    }
    if (!label_has_unit(header[1], expected_unit)) {
        throw ConfigError(path + ": column '" + header[1] + "' does not carry unit '" +
                          std::string(expected_unit) + "'");
    }

    std::vector<std::int64_t> stamps;
    std::vector<double> raw;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 2 fields");
        }
        stamps.push_back(parse_iso8601(fields[0]));
        raw.push_back(parse_value(fields[1], path, line_no));
    }
    if (stamps.size() < 2) throw ConfigError(path + ": need at least 2 rows to establish spacing");

    // Base spacing = smallest positive gap; larger gaps must be integer
    // multiples of it.
    std::int64_t step_s = 0;
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        const std::int64_t d = stamps[i] - stamps[i - 1];
        if (d <= 0) {
            throw ConfigError(path + ": timestamps not strictly increasing near row " +
                              std::to_string(i + 1));
        }
        if (step_s == 0 || d < step_s) step_s = d;
    }

    CsvSeries out;
    out.start_epoch_s = stamps.front();
    out.unit = header[1];
    std::vector<double> values;
    values.push_back(raw.front());
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        const std::int64_t d = stamps[i] - stamps[i - 1];
        const double ratio = static_cast<double>(d) / static_cast<double>(step_s);
        const auto steps = static_cast<std::int64_t>(std::llround(ratio));
        if (std::abs(ratio - static_cast<double>(steps)) * step_s > 1.0) {
            throw ConfigError(path + ": non-uniform spacing between " +
                              format_iso8601(stamps[i - 1]) + " and " + format_iso8601(stamps[i]));
        }
        if (steps > 2) {
            throw ConfigError(path + ": gap of " + std::to_string(steps) + " steps between " +
                              format_iso8601(stamps[i - 1]) + " and " + format_iso8601(stamps[i]) +
                              " exceeds the 2-step interpolation limit");
        }
        if (steps == 2) {
            values.push_back(0.5 * (raw[i - 1] + raw[i]));
            ++out.interpolated_gaps;
        }
        values.push_back(raw[i]);
    }

    const double h_hours = static_cast<double>(step_s) / 3600.0;
    const Grid grid{0.0, h_hours, values.size()};
    out.series = SampledSeries(grid, std::move(values));
    require_finite(out.series, "ingested series");
    return out;
}

void write_series_csv(const SampledSeries& series, const std::string& column_label,
                      const std::string& path, std::int64_t start_epoch_s) {
    std::string body = "timestamp," + column_label + "\n";
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        const std::int64_t t =
            start_epoch_s + static_cast<std::int64_t>(std::llround(k * series.grid.h * 3600.0));
        body += format_iso8601(t) + "," + fmt12(series.values[k]) + "\n";
    }
    write_file_atomic(path, body);
}

namespace {

nlohmann::ordered_json grid_json(const Grid& g) {
    return {{"t0_h", g.t0}, {"h_h", g.h}, {"n", g.n}};
}

nlohmann::ordered_json meta_json(const WriteMeta& meta) {
    return {{"start_epoch_s", meta.start_epoch_s},
            {"seed", meta.seed},
            {"config_hash", meta.config_hash}};
}

} // namespace

void write_results(const SimulationResult& result, const std::string& path, OutputFormat format,
                   const WriteMeta& meta) {
    if (format == OutputFormat::csv) {
        std::string body = "timestamp,soc_kwh,batt_kw,diesel_kw,pv_kw,curtailed_kw,deficit_kw\n";
        for (std::size_t k = 0; k < result.soc.values.size(); ++k) {
            const std::int64_t t =
                meta.start_epoch_s +
                static_cast<std::int64_t>(std::llround(k * result.soc.grid.h * 3600.0));
            body += format_iso8601(t);
            body += "," + fmt12(result.soc.values[k]);
            body += "," + fmt12(result.battery_power.values[k]);
            body += "," + fmt12(result.diesel_power.values[k]);
            body += "," + fmt12(result.pv_used.values[k]);
            body += "," + fmt12(result.curtailed.values[k]);
            body += "," + fmt12(result.deficit.values[k]);
            body += "\n";
        }
        write_file_atomic(path, body);
        return;
    }

    nlohmann::ordered_json doc;
    doc["schema"] = "vs-1";
    doc["kind"] = "simulation_result";
    doc["meta"] = meta_json(meta);
    doc["grid"] = grid_json(result.soc.grid);
    doc["initial_soc_kwh"] = result.initial_soc_kwh;
    doc["series"]["soc_kwh"] = result.soc.values;
    doc["series"]["batt_kw"] = result.battery_power.values;
    doc["series"]["diesel_kw"] = result.diesel_power.values;
    doc["series"]["pv_kw"] = result.pv_used.values;
    doc["series"]["curtailed_kw"] = result.curtailed.values;
    doc["series"]["deficit_kw"] = result.deficit.values;
    doc["series"]["pv_to_batt_kw"] = result.pv_to_batt.values;
    doc["series"]["dg_to_batt_kw"] = result.dg_to_batt.values;
    doc["diesel_state"] = result.diesel_state;
    doc["totals"] = {{"battery_in_kwh", result.totals.battery_in_kwh},
                     {"pv_to_batt_kwh", result.totals.pv_to_batt_kwh},
                     {"dg_to_batt_kwh", result.totals.dg_to_batt_kwh}};
    write_file_atomic(path, doc.dump(2) + "\n");
}

void write_results(const Solution& solution, const std::string& path, OutputFormat format,
                   const WriteMeta& meta) {
    if (format == OutputFormat::csv) {
        write_series_csv(solution.x, "x_kw_per_h", path, meta.start_epoch_s);
        return;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = "vs-1";
    doc["kind"] = "solution";
    doc["meta"] = meta_json(meta);
    doc["grid"] = grid_json(solution.x.grid);
    doc["x"] = solution.x.values;
    doc["residual_l2"] = solution.residual;
    doc["iterations_per_node"] = solution.iterations_per_node;
    write_file_atomic(path, doc.dump(2) + "\n");
}

void write_results(const MetricsReport& report, const std::string& path, OutputFormat format,
                   const WriteMeta& meta) {
    if (format == OutputFormat::csv) {
        std::string body = "rmse,mae,mape_pct,n_points,skipped_zero_denominator\n";
        body += fmt12(report.rmse) + "," + fmt12(report.mae) + "," + fmt12(report.mape_pct) + "," +
                std::to_string(report.n_points) + "," +
                std::to_string(report.skipped_zero_denominator) + "\n";
        write_file_atomic(path, body);
        return;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = "vs-1";
    doc["kind"] = "metrics";
    doc["meta"] = meta_json(meta);
    doc["rmse"] = report.rmse;
    doc["mae"] = report.mae;
    doc["mape_pct"] = report.mape_pct;
    doc["n_points"] = report.n_points;
    doc["skipped_zero_denominator"] = report.skipped_zero_denominator;
    write_file_atomic(path, doc.dump(2) + "\n");
}

SimulationCsv read_simulation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");

    std::string line;
    if (!read_line(in, line)) throw ConfigError(path + ": empty file");
    if (line != "timestamp,soc_kwh,batt_kw,diesel_kw,pv_kw,curtailed_kw,deficit_kw") {
        throw ConfigError(path + ": unexpected simulation CSV header");
    }

    std::vector<std::int64_t> stamps;
    std::vector<std::vector<double>> cols(6);
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 7) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 7 fields");
        }
        stamps.push_back(parse_iso8601(fields[0]));
        for (std::size_t c = 0; c < 6; ++c) {
            cols[c].push_back(parse_value(fields[c + 1], path, line_no));
        }
    }
    if (stamps.empty()) throw ConfigError(path + ": no data rows");

    const double h_hours =
        stamps.size() > 1 ? static_cast<double>(stamps[1] - stamps[0]) / 3600.0 : 1.0;
    const Grid grid{0.0, h_hours, stamps.size()};

    SimulationCsv out;
    out.start_epoch_s = stamps.front();
    out.soc = SampledSeries(grid, std::move(cols[0]));
    out.battery_power = SampledSeries(grid, std::move(cols[1]));
    out.diesel_power = SampledSeries(grid, std::move(cols[2]));
    out.pv_used = SampledSeries(grid, std::move(cols[3]));
    out.curtailed = SampledSeries(grid, std::move(cols[4]));
    out.deficit = SampledSeries(grid, std::move(cols[5]));
    return out;
}

} // namespace vsim::io
