#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vsim/series.hpp"

namespace vsim {

/// Agreement metrics between a candidate series and a reference series.
/// MAPE is reported in percent and skips points whose reference magnitude is
/// below 1e-12; the skip count is part of the report. Note rmse >= mae does
/// not hold in general and is not asserted anywhere.
struct MetricsReport {
    double rmse = 0.0;
    double mae = 0.0;
    double mape_pct = 0.0;
    std::size_t n_points = 0;
    std::size_t skipped_zero_denominator = 0;
};

/// RMSE, MAE and MAPE of `candidate` against `reference` (the reference plays
/// the denominator of MAPE). Grids must match; throws ConfigError on empty
/// input.
MetricsReport compare_models(const SampledSeries& candidate, const SampledSeries& reference);

/// Month (1..12) per sample node.
struct CalendarMap {
    std::vector<std::uint8_t> month;
};

/// Calendar for a synthetic 365-day year starting Jan 1; hour k of the series
/// maps to its day's month. Repeats for multi-year series.
CalendarMap synthetic_year_calendar(std::size_t n_hours);

/// Calendar derived from real timestamps: start epoch (UTC seconds) plus the
/// grid spacing.
CalendarMap calendar_from_epoch(std::int64_t start_epoch_s, double h_hours, std::size_t n);

/// Arithmetic mean of the series per month. Every month must be populated;
/// throws ConfigError naming the first empty one.
std::array<double, 12> monthly_averages(const SampledSeries& series, const CalendarMap& calendar);

} // namespace vsim
