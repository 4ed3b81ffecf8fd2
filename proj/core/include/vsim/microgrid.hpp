#pragma once

#include <utility>
#include <vector>

#include "vsim/battery.hpp"
#include "vsim/kernel.hpp"
#include "vsim/storage.hpp"

namespace vsim {

enum class ModelKind { linear, volterra };

/// Plant ratings, dispatch thresholds and the battery model selection for an
/// isolated PV + storage + diesel system.
struct MicrogridConfig {
    double pv_rating_kw = 75.0;
    double inverter_solar_kw = 75.0;
    double inverter_batt_kw = 72.0;
    int diesel_units = 2;
    double diesel_unit_kw = 100.0;
    BatteryParams battery;
    double diesel_on_soc_frac = 0.20;   // latch on below this SoC
    double diesel_off_soc_frac = 0.80;  // latch off at or above this SoC
    ModelKind model_kind = ModelKind::linear;
    int volterra_window = 24;           // rolling solve window (steps)
    double alpha = 0.0;                 // Lavrentiev parameter for the volterra model

    double diesel_fleet_kw() const { return diesel_units * diesel_unit_kw; }
    void validate() const;
};

struct SimState {
    double soc_kwh = 0.0;
    bool diesel_on = false;
};

/// Power flows of a single dispatch step, all in kW over the step.
struct StepFlows {
    double pv_used = 0.0;        // PV power consumed by load + battery
    double battery_power = 0.0;  // terminal battery power, + = charge
    double diesel_power = 0.0;   // full fleet output while latched on
    double pv_to_batt = 0.0;
    double dg_to_batt = 0.0;
    double curtailed = 0.0;      // discarded PV + diesel surplus
    double deficit = 0.0;        // unserved load
    bool diesel_on = false;
};

/// One dispatch decision under the rule set: PV serves the load first,
/// surplus charges the battery, shortage discharges it, and the diesel fleet
/// latches on at full capacity when the SoC drops below the on-threshold (or
/// when the battery alone cannot carry the residual load), covering the load
/// and charging the battery; it unlatches at the off-threshold. Battery power
/// is capped by the battery inverter, v_max, the optional r_bs step limit and
/// the available SoC headroom. The returned state advances the SoC with the
/// discrete constant-efficiency step.
std::pair<SimState, StepFlows> dispatch_step(const SimState& state, double pv_kw, double load_kw,
                                             double dt_h, const MicrogridConfig& cfg);

struct SimulationTotals {
    double battery_in_kwh = 0.0;  // terminal energy supplied to the battery
    double pv_to_batt_kwh = 0.0;
    double dg_to_batt_kwh = 0.0;
};

/// Full per-step record of a simulation run. All series live on the input
/// cell grid (one value per step); `soc` holds the end-of-step stored energy.
struct SimulationResult {
    SampledSeries soc;
    SampledSeries battery_power;
    SampledSeries diesel_power;
    SampledSeries pv_used;
    SampledSeries curtailed;
    SampledSeries deficit;
    SampledSeries pv_to_batt;
    SampledSeries dg_to_batt;
    std::vector<bool> diesel_state;
    SimulationTotals totals;
    double initial_soc_kwh = 0.0;
};

/// Replays hourly PV and load series through dispatch_step. The linear model
/// advances the SoC step by step; the volterra model re-solves the stored-side
/// power trajectory per rolling window through the constrained integral model
/// (kernel defaults to the unit efficiency-memory kernel) and carries the
/// window-end state forward.
SimulationResult simulate(const MicrogridConfig& cfg, const SampledSeries& pv,
                          const SampledSeries& load, const PiecewiseKernel* kernel = nullptr);

/// Energy totals of a run, in kWh (series sums times the step width).
struct EnergySummary {
    double battery_in_kwh = 0.0;
    double pv_to_batt_kwh = 0.0;
    double dg_to_batt_kwh = 0.0;
    double battery_out_kwh = 0.0;
    double diesel_kwh = 0.0;
    double pv_used_kwh = 0.0;
    double curtailed_kwh = 0.0;
    double deficit_kwh = 0.0;
};

EnergySummary annual_energy_summary(const SimulationResult& result);

} // namespace vsim
