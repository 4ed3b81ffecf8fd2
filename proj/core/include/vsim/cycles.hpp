#pragma once

#include "vsim/battery.hpp"

namespace vsim {

/// Cycle statistics extracted from a stored-energy trajectory.
struct CycleReport {
    double equivalent_full_cycles = 0.0;
    std::size_t half_cycles = 0;
    double mean_depth_of_discharge = 0.0;   // fraction of capacity
};

/// Threshold-filtered extrema counting: reversals of E smaller than
/// `depth_threshold_frac` of capacity are ignored, the surviving turning
/// points delimit half-cycles, and a trajectory with no confirmed reversal
/// counts zero (a monotone ramp is not a cycle). Equivalent full cycles sum
/// the half-cycle depths over twice the capacity.
CycleReport count_cycles(const SampledSeries& energy, const BatteryParams& params,
                         double depth_threshold_frac = 0.01);

/// Expected service life in years: rated cycle count over observed cycles per
/// year. Throws ConfigError when cycles_per_year <= 0 or the rating is unset.
double estimate_lifetime_years(double cycles_per_year, const BatteryParams& params);

} // namespace vsim
