#include "vsim/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vsim {

double BatteryParams::step_power_limit_kw() const {
    return r_bs ? *r_bs * capacity_kwh : std::numeric_limits<double>::infinity();
}

void BatteryParams::validate() const {
    if (!(capacity_kwh > 0.0)) throw ConfigError("battery capacity must be positive");
    if (!(soc_min_frac >= 0.0 && soc_min_frac < soc_max_frac && soc_max_frac <= 1.0)) {
        throw ConfigError("battery SoC bounds must satisfy 0 <= min < max <= 1");
    }
    if (!(v_max_kw > 0.0)) throw ConfigError("battery v_max must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("battery efficiency must be in (0, 1]");
    if (r_bs && !(*r_bs >= 0.2 && *r_bs <= 0.4)) {
        throw ConfigError("battery r_bs must lie in [0.2, 0.4] when set (got " +
                          std::to_string(*r_bs) + ")");
    }
    if (rated_cycles && !(*rated_cycles > 0.0)) {
        throw ConfigError("rated_cycles must be positive when set");
    }
    if (!(initial_soc_frac >= 0.0 && initial_soc_frac <= 1.0)) {
        throw ConfigError("initial SoC fraction must lie in [0, 1]");
    }
}

SampledSeries soc_ampere_hour(double initial_soc_kwh, const SampledSeries& current, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("efficiency must be in (0, 1]");
    require_finite(current, "current series");

    const Grid nodes{current.grid.t0, current.grid.h, current.grid.n + 1};
    SampledSeries soc = SampledSeries::zeros(nodes);
    soc.values[0] = initial_soc_kwh;
    double acc = initial_soc_kwh;
    for (std::size_t j = 0; j < current.grid.n; ++j) {
        const double i = current.values[j];
        acc += current.grid.h * (i > 0.0 ? eta * i : i);
        soc.values[j + 1] = acc;
    }
    return soc;
}

double linear_model_step(double prev_soc_kwh, double power_kw, double dt_h,
                         const BatteryParams& params) {
    const double limit = params.step_power_limit_kw();
    if (std::abs(power_kw) > limit * (1.0 + 1e-12)) {
        throw ConfigError("battery power " + std::to_string(power_kw) +
                          " kW exceeds the r_bs step limit of " + std::to_string(limit) + " kW");
    }
    const double eff = power_kw > 0.0 ? params.eta : 1.0;
    const double next = prev_soc_kwh + eff * power_kw * dt_h;
    return std::clamp(next, params.e_min_kwh(), params.e_max_kwh());
}

} // namespace vsim
