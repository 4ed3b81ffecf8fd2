#include "vsim/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace vsim {

// TODO: rainflow counting would weight nested swings by depth; the threshold
// filter is sufficient for the lifetime ratio this feeds.
CycleReport count_cycles(const SampledSeries& energy, const BatteryParams& params,
                         double depth_threshold_frac) {
    params.validate();
    require_finite(energy, "energy trajectory");
    const double threshold = depth_threshold_frac * params.capacity_kwh;

    // Hysteresis turning-point extraction: ride the current direction,
    // confirm a reversal only once the trajectory retreats from the running
    // extremum by at least the threshold. Leaving the starting extremum only
    // establishes the direction; it is not a reversal.
    std::vector<double> reversals;
    double cand = energy.values.front();
    double start_extreme = cand;
    double run_hi = cand;
    double run_lo = cand;
    int dir = 0; // 0 unknown, +1 rising, -1 falling
    for (std::size_t i = 1; i < energy.size(); ++i) {
        const double e = energy.values[i];
        if (dir == 0) {
            run_hi = std::max(run_hi, e);
            run_lo = std::min(run_lo, e);
            if (run_hi - e >= threshold) {
                start_extreme = run_hi;
                dir = -1;
                cand = e;
            } else if (e - run_lo >= threshold) {
                start_extreme = run_lo;
                dir = +1;
                cand = e;
            }
        } else if (dir > 0) {
            if (e >= cand) {
                cand = e;
            } else if (cand - e >= threshold) {
                reversals.push_back(cand);
                dir = -1;
                cand = e;
            }
        } else {
            if (e <= cand) {
                cand = e;
            } else if (e - cand >= threshold) {
                reversals.push_back(cand);
                dir = +1;
                cand = e;
            }
        }
    }

    CycleReport report;
    if (reversals.empty()) return report; // monotone or sub-threshold ripple

    std::vector<double> turning;
    turning.push_back(start_extreme);
    turning.insert(turning.end(), reversals.begin(), reversals.end());
    turning.push_back(cand); // final running extremum stands in for the tail

    double depth_sum = 0.0;
    double discharge_depth_sum = 0.0;
    std::size_t discharge_halves = 0;
    for (std::size_t i = 0; i + 1 < turning.size(); ++i) {
        const double swing = turning[i + 1] - turning[i];
        if (std::abs(swing) < threshold) continue;
        ++report.half_cycles;
        depth_sum += std::abs(swing);
        if (swing < 0.0) {
            discharge_depth_sum += -swing;
            ++discharge_halves;
        }
    }

    report.equivalent_full_cycles = depth_sum / (2.0 * params.capacity_kwh);
    if (discharge_halves > 0) {
        report.mean_depth_of_discharge =
            discharge_depth_sum / static_cast<double>(discharge_halves) / params.capacity_kwh;
    }
    return report;
}

double estimate_lifetime_years(double cycles_per_year, const BatteryParams& params) {
    if (!params.rated_cycles) {
        throw ConfigError("battery rated_cycles is not set");
    }
    if (!(cycles_per_year > 0.0)) {
        throw ConfigError("cycles_per_year must be positive (got " +
                          std::to_string(cycles_per_year) + ")");
    }
    return *params.rated_cycles / cycles_per_year;
}

} // namespace vsim
