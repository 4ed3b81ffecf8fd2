#include "vsim/storage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsim {

namespace {

void require_feasible(const BatteryParams& params, double initial_energy_kwh) {
    params.validate();
    if (initial_energy_kwh < params.e_min_kwh() - 1e-9 ||
        initial_energy_kwh > params.e_max_kwh() + 1e-9) {
        throw ConfigError("initial stored energy " + std::to_string(initial_energy_kwh) +
                          " kWh lies outside [E_min, E_max] = [" +
                          std::to_string(params.e_min_kwh()) + ", " +
                          std::to_string(params.e_max_kwh()) + "]");
    }
}

} // namespace

DispatchSolution project_constraints(const SampledSeries& x, const BatteryParams& params,
                                     double initial_energy_kwh) {
    require_feasible(params, initial_energy_kwh);
    require_finite(x, "power ramp");

    const double h = x.grid.h;
    const double vmax = params.v_max_kw;
    const double e_min = params.e_min_kwh();
    const double e_max = params.e_max_kwh();

    DispatchSolution out;
    out.x = SampledSeries::zeros(x.grid);
    out.v = SampledSeries::zeros(x.grid);
    out.energy = SampledSeries::zeros(x.grid);
    out.curtailed = SampledSeries::zeros(x.grid);
    out.deficit = SampledSeries::zeros(x.grid);
    out.initial_energy_kwh = initial_energy_kwh;

    // The candidate power is the unconstrained cumulative integral of x, so a
    // sustained demand keeps producing curtailment/deficit while the state is
    // pinned at a bound.
    double v_cand = 0.0;
    double v_prev = 0.0;
    double e_prev = initial_energy_kwh;
    for (std::size_t k = 0; k < x.grid.n; ++k) {
        v_cand += h * x.values[k];
        double v_real = std::clamp(v_cand, -vmax, vmax);

        // The energy clip shrinks |v_real| further (never flips its sign), so
        // the speed bound stays satisfied.
        double e_real = e_prev + h * v_real;
        if (e_real > e_max) {
            v_real = (e_max - e_prev) / h;
            e_real = e_max;
        } else if (e_real < e_min) {
            v_real = (e_min - e_prev) / h;
            e_real = e_min;
        }

        const double clipped = v_cand - v_real;
        out.curtailed.values[k] = std::max(clipped, 0.0);
        out.deficit.values[k] = std::max(-clipped, 0.0);
        out.v.values[k] = v_real;
        out.energy.values[k] = e_real;
        out.x.values[k] = (v_real - v_prev) / h;

        v_prev = v_real;
        e_prev = e_real;
    }
    return out;
}

DispatchSolution volterra_soc_solve(const SampledSeries& imbalance, const PiecewiseKernel& kernel,
                                    const BatteryParams& params, const VolterraSocOpts& opts) {
    require_feasible(params, params.initial_energy_kwh());
    require_finite(imbalance, "imbalance");

    // Baseline handling: the continuous problem requires f(t0) = 0, which real
    // data violates. Zeroing the t0 sample shifts the baseline out of the
    // hypothesis while the raw values at t >= t1 keep it in the data, so the
    // solve absorbs it as an initial power step in the first cell.
    SampledSeries f = imbalance;
    f.values[0] = 0.0;

    Solution sol;
    if (opts.alpha > 0.0) {
        sol = solve_vie_lavrentiev(kernel, f, opts.alpha, opts.solver);
    } else {
        sol = solve_vie_first_kind(kernel, f, opts.solver);
    }
    return project_constraints(sol.x, params, params.initial_energy_kwh());
}

} // namespace vsim
