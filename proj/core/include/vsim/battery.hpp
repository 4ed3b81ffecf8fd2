#pragma once

#include <optional>

#include "vsim/series.hpp"

namespace vsim {

/// Battery plant parameters. Energies in kWh, powers in kW.
///
/// The Coulombic efficiency `eta` applies to charging power only; discharge
/// is counted one-to-one. `r_bs` optionally restricts per-step terminal power
/// to a fraction of the installed capacity.
struct BatteryParams {
    double capacity_kwh = 0.0;        // installed capacity Q_max
    double soc_min_frac = 0.2;
    double soc_max_frac = 1.0;
    double v_max_kw = 0.0;            // maximum speed of charge/discharge
    double eta = 0.8;                 // Coulombic efficiency, charge side
    std::optional<double> r_bs;       // per-step power limit as capacity fraction
    std::optional<double> rated_cycles;
    double initial_soc_frac = 0.5;

    double e_min_kwh() const { return soc_min_frac * capacity_kwh; }
    double e_max_kwh() const { return soc_max_frac * capacity_kwh; }
    double initial_energy_kwh() const { return initial_soc_frac * capacity_kwh; }
    double step_power_limit_kw() const;   // r_bs * capacity, +inf when unset

    /// Throws ConfigError on out-of-range parameters.
    void validate() const;
};

/// Ampere-hour counting, the unconstrained direct model:
///   SOC(t_k) = SOC(0) + h * sum_{j<=k} eta_eff(i_j) * i_j,
/// with eta applied while charging (i > 0) and unit efficiency while
/// discharging. `current` is a midpoint power series in kW; the returned node
/// series has one more sample and starts at `initial_soc_kwh`. No clamping.
SampledSeries soc_ampere_hour(double initial_soc_kwh, const SampledSeries& current, double eta);

/// One step of the classic discrete model: next = prev + eta_eff * power * dt,
/// clamped to the SoC window. Throws ConfigError when |power| exceeds the
/// r_bs restriction.
double linear_model_step(double prev_soc_kwh, double power_kw, double dt_h,
                         const BatteryParams& params);

} // namespace vsim
