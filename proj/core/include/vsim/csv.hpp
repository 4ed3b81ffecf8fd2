#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "vsim/metrics.hpp"
#include "vsim/microgrid.hpp"
#include "vsim/vie.hpp"

namespace vsim::io {

/// Recognised unit tags for series columns. A column label carries its unit
/// as a suffix, e.g. "value_kw", "soc_kwh", "x_kw_per_h".
inline constexpr std::string_view kUnitPower = "kw";
inline constexpr std::string_view kUnitEnergy = "kwh";
inline constexpr std::string_view kUnitRamp = "kw_per_h";

std::string format_iso8601(std::int64_t epoch_s);
std::int64_t parse_iso8601(const std::string& text);

/// A time series read from disk, with its real-time anchor and unit tag.
struct CsvSeries {
    SampledSeries series;          // grid.t0 = 0, h in hours
    std::int64_t start_epoch_s = 0;
    std::string unit;
    int interpolated_gaps = 0;     // single-sample gaps filled by interpolation
};

/// Reads a two-column CSV (timestamp,<label>_<unit>). Timestamps must be
/// strictly increasing and uniformly spaced; a gap of one missing sample is
/// linearly interpolated and counted, anything longer is rejected. The column
/// unit must match `expected_unit`.
CsvSeries load_timeseries_csv(const std::string& path, std::string_view expected_unit);

/// Writes a two-column series CSV compatible with load_timeseries_csv.
/// Values are printed with 12 significant digits; writes are atomic
/// (temp file + rename).
void write_series_csv(const SampledSeries& series, const std::string& column_label,
                      const std::string& path, std::int64_t start_epoch_s = 0);

enum class OutputFormat { csv, json };

/// Reproducibility metadata embedded in JSON documents.
struct WriteMeta {
    std::int64_t start_epoch_s = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
};

/// Serialises a simulation run. CSV column order is fixed:
/// timestamp,soc_kwh,batt_kw,diesel_kw,pv_kw,curtailed_kw,deficit_kw.
/// JSON documents carry schema version "vs-1" plus the metadata and omit
/// wall-clock information entirely.
void write_results(const SimulationResult& result, const std::string& path, OutputFormat format,
                   const WriteMeta& meta = {});
void write_results(const Solution& solution, const std::string& path, OutputFormat format,
                   const WriteMeta& meta = {});
void write_results(const MetricsReport& report, const std::string& path, OutputFormat format,
                   const WriteMeta& meta = {});

/// Columns of a simulation CSV read back from disk.
struct SimulationCsv {
    std::int64_t start_epoch_s = 0;
    SampledSeries soc;
    SampledSeries battery_power;
    SampledSeries diesel_power;
    SampledSeries pv_used;
    SampledSeries curtailed;
    SampledSeries deficit;
};

SimulationCsv read_simulation_csv(const std::string& path);

} // namespace vsim::io
