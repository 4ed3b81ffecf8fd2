#include "vsim/microgrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsim {

void MicrogridConfig::validate() const {
    battery.validate();
    if (!(pv_rating_kw > 0.0) || !(inverter_solar_kw > 0.0) || !(inverter_batt_kw > 0.0) ||
        !(diesel_unit_kw > 0.0)) {
        throw ConfigError("all plant ratings must be positive");
    }
    if (diesel_units < 0) throw ConfigError("diesel unit count cannot be negative");
    if (!(diesel_on_soc_frac < diesel_off_soc_frac &&
          diesel_off_soc_frac <= battery.soc_max_frac)) {
        throw ConfigError("diesel thresholds must satisfy on < off <= soc_max");
    }
    if (volterra_window < 1) throw ConfigError("volterra window must be at least 1 step");
    if (alpha < 0.0) throw ConfigError("alpha cannot be negative");
}

namespace {

struct BatteryCaps {
    double charge;
    double discharge;
};

BatteryCaps battery_caps(double soc_kwh, double dt_h, const MicrogridConfig& cfg) {
    const auto& bat = cfg.battery;
    const double shared = std::min({cfg.inverter_batt_kw, bat.v_max_kw,
                                    bat.step_power_limit_kw()});
    const double headroom = std::max(0.0, (bat.e_max_kwh() - soc_kwh) / (bat.eta * dt_h));
    const double available = std::max(0.0, (soc_kwh - bat.e_min_kwh()) / dt_h);
    return {std::min(shared, headroom), std::min(shared, available)};
}

/// Flows for one step with the diesel latch already decided.
StepFlows run_rules(double soc_kwh, bool diesel_on, double pv_kw, double load_kw, double dt_h,
                    const MicrogridConfig& cfg) {
    StepFlows flows;
    flows.diesel_on = diesel_on;

    const double pv_ac = std::min(pv_kw, cfg.inverter_solar_kw);
    const double pv_to_load = std::min(pv_ac, load_kw);
    const double residual_load = load_kw - pv_to_load;
    const double pv_surplus = pv_ac - pv_to_load;
    const BatteryCaps caps = battery_caps(soc_kwh, dt_h, cfg);

    double pv_unused = pv_kw - pv_ac; // clipped at the solar inverter

    if (diesel_on) {
        flows.diesel_power = cfg.diesel_fleet_kw();
        const double dg_to_load = std::min(flows.diesel_power, residual_load);
        double unmet = residual_load - dg_to_load;
        if (unmet > 0.0) {
            // Fleet saturated; the battery assists with whatever it has left.
            const double assist = std::min(unmet, caps.discharge);
            flows.battery_power = -assist;
            flows.deficit = unmet - assist;
            flows.pv_used = pv_to_load;
            flows.curtailed = pv_unused;
        } else {
            const double dg_surplus = flows.diesel_power - dg_to_load;
            const double charge = std::min(pv_surplus + dg_surplus, caps.charge);
            flows.pv_to_batt = std::min(pv_surplus, charge);
            flows.dg_to_batt = charge - flows.pv_to_batt;
            flows.battery_power = charge;
            flows.pv_used = pv_to_load + flows.pv_to_batt;
            flows.curtailed = pv_unused + (pv_surplus - flows.pv_to_batt) +
                              (dg_surplus - flows.dg_to_batt);
        }
    } else if (residual_load > 0.0) {
        const double discharge = std::min(residual_load, caps.discharge);
        flows.battery_power = -discharge;
        flows.deficit = residual_load - discharge;
        flows.pv_used = pv_to_load;
        flows.curtailed = pv_unused;
    } else {
        const double charge = std::min(pv_surplus, caps.charge);
        flows.pv_to_batt = charge;
        flows.battery_power = charge;
        flows.pv_used = pv_to_load + charge;
        flows.curtailed = pv_unused + (pv_surplus - charge);
    }
    return flows;
}

} // namespace

std::pair<SimState, StepFlows> dispatch_step(const SimState& state, double pv_kw, double load_kw,
                                             double dt_h, const MicrogridConfig& cfg) {
    if (pv_kw < 0.0 || load_kw < 0.0) {
        throw ConfigError("pv and load must be nonnegative (got pv = " + std::to_string(pv_kw) +
                          ", load = " + std::to_string(load_kw) + ")");
    }
    if (!(dt_h > 0.0)) throw ConfigError("dispatch step width must be positive");

    const auto& bat = cfg.battery;
    const double soc_frac = state.soc_kwh / bat.capacity_kwh;

    bool diesel_on = state.diesel_on;
    if (diesel_on && soc_frac >= cfg.diesel_off_soc_frac) diesel_on = false;
    if (!diesel_on && soc_frac < cfg.diesel_on_soc_frac) diesel_on = true;

    StepFlows flows = run_rules(state.soc_kwh, diesel_on, pv_kw, load_kw, dt_h, cfg);
    if (!diesel_on && flows.deficit > 1e-12) {
        // Loss-of-load prevention: the battery alone cannot carry the load,
        // so the backup fires this step rather than after the SoC threshold.
        diesel_on = true;
        flows = run_rules(state.soc_kwh, diesel_on, pv_kw, load_kw, dt_h, cfg);
    }

    SimState next;
    next.diesel_on = diesel_on;
    next.soc_kwh = linear_model_step(state.soc_kwh, flows.battery_power, dt_h, bat);
    return {next, flows};
}

SimulationResult simulate(const MicrogridConfig& cfg, const SampledSeries& pv,
                          const SampledSeries& load, const PiecewiseKernel* kernel) {
    cfg.validate();
    require_same_grid(pv, load);
    require_finite(pv, "pv series");
    require_finite(load, "load series");

    const Grid grid = pv.grid;
    const double h = grid.h;
    const auto& bat = cfg.battery;

    SimulationResult res;
    res.soc = SampledSeries::zeros(grid);
    res.battery_power = SampledSeries::zeros(grid);
    res.diesel_power = SampledSeries::zeros(grid);
    res.pv_used = SampledSeries::zeros(grid);
    res.curtailed = SampledSeries::zeros(grid);
    res.deficit = SampledSeries::zeros(grid);
    res.pv_to_batt = SampledSeries::zeros(grid);
    res.dg_to_batt = SampledSeries::zeros(grid);
    res.diesel_state.resize(grid.n, false);
    res.initial_soc_kwh = bat.initial_energy_kwh();

    const bool volterra = cfg.model_kind == ModelKind::volterra;
    PiecewiseKernel unit_kernel = PiecewiseKernel::constant(1.0);
    const PiecewiseKernel& window_kernel = kernel ? *kernel : unit_kernel;

    SimState state{res.initial_soc_kwh, false};

    // Rolling-window state for the volterra model: terminal battery power is
    // converted to stored-side power (eta on charge), solved through the
    // constrained integral model, and the window-end energy replaces the
    // running SoC.
    std::vector<double> window_stored;
    double window_start_soc = state.soc_kwh;
    std::size_t window_begin = 0;

    auto flush_window = [&](std::size_t end) {
        if (window_stored.empty()) return;
        const Grid nodes{0.0, h, window_stored.size() + 1};
        SampledSeries f = SampledSeries::zeros(nodes);
        for (std::size_t i = 0; i < window_stored.size(); ++i) f.values[i + 1] = window_stored[i];

        BatteryParams window_bat = bat;
        window_bat.initial_soc_frac = window_start_soc / bat.capacity_kwh;
        VolterraSocOpts opts;
        opts.alpha = cfg.alpha;
        const DispatchSolution sol = volterra_soc_solve(f, window_kernel, window_bat, opts);

        for (std::size_t i = 0; i < sol.energy.size(); ++i) {
            res.soc.values[window_begin + i] = sol.energy.values[i];
        }
        state.soc_kwh = sol.energy.values.back();
        window_start_soc = state.soc_kwh;
        window_begin = end;
        window_stored.clear();
    };

    for (std::size_t k = 0; k < grid.n; ++k) {
        auto [next, flows] = dispatch_step(state, pv.values[k], load.values[k], h, cfg);

        res.battery_power.values[k] = flows.battery_power;
        res.diesel_power.values[k] = flows.diesel_power;
        res.pv_used.values[k] = flows.pv_used;
        res.curtailed.values[k] = flows.curtailed;
        res.deficit.values[k] = flows.deficit;
        res.pv_to_batt.values[k] = flows.pv_to_batt;
        res.dg_to_batt.values[k] = flows.dg_to_batt;
        res.diesel_state[k] = flows.diesel_on;
        res.soc.values[k] = next.soc_kwh;

        state = next;
        if (volterra) {
            const double p = flows.battery_power;
            window_stored.push_back(p > 0.0 ? bat.eta * p : p);
            if (window_stored.size() == static_cast<std::size_t>(cfg.volterra_window)) {
                flush_window(k + 1); // replaces state.soc_kwh with the window solution
            }
        }
    }
    if (volterra) flush_window(grid.n);

    for (std::size_t k = 0; k < grid.n; ++k) {
        const double p = res.battery_power.values[k];
        if (p > 0.0) res.totals.battery_in_kwh += p * h;
        res.totals.pv_to_batt_kwh += res.pv_to_batt.values[k] * h;
        res.totals.dg_to_batt_kwh += res.dg_to_batt.values[k] * h;
    }
    return res;
}

EnergySummary annual_energy_summary(const SimulationResult& result) {
    EnergySummary s;
    const double h = result.soc.grid.h;
    for (std::size_t k = 0; k < result.soc.size(); ++k) {
        const double p = result.battery_power.values[k];
        if (p > 0.0) s.battery_in_kwh += p * h;
        if (p < 0.0) s.battery_out_kwh += -p * h;
        s.pv_to_batt_kwh += result.pv_to_batt.values[k] * h;
        s.dg_to_batt_kwh += result.dg_to_batt.values[k] * h;
        s.diesel_kwh += result.diesel_power.values[k] * h;
        s.pv_used_kwh += result.pv_used.values[k] * h;
        s.curtailed_kwh += result.curtailed.values[k] * h;
        s.deficit_kwh += result.deficit.values[k] * h;
    }
    return s;
}

} // namespace vsim
