#pragma once

#include "vsim/battery.hpp"
#include "vsim/vie.hpp"

namespace vsim {

/// Constraint-projected storage trajectory. All five series share the cell
/// grid of x and hold per-step values:
///   x          power ramp (kW/h), the back-computed realised derivative of v
///   v          battery power (kW, + = charge), cumulative integral of x
///   energy     stored energy (kWh), cumulative integral of v from initial_energy
///   curtailed  charge power clipped by the projection (kW, >= 0)
///   deficit    discharge power clipped by the projection (kW, >= 0)
/// At every step curtailed * deficit = 0, and the candidate power (the
/// unconstrained cumulative integral of the input ramp) equals
/// v + curtailed - deficit.
struct DispatchSolution {
    SampledSeries x;
    SampledSeries v;
    SampledSeries energy;
    SampledSeries curtailed;
    SampledSeries deficit;
    double initial_energy_kwh = 0.0;
};

/// Options for the constrained Volterra solve.
struct VolterraSocOpts {
    double alpha = 0.0;      // Lavrentiev parameter; 0 = plain first-kind solve
    SolverOpts solver;
};

/// Sequential projection of a power ramp onto the battery constraints:
/// integrate x into v, clip v to [-v_max, v_max], integrate v into the stored
/// energy, clip that to [E_min, E_max] by truncating v. Clipped charge power
/// is logged as curtailed, clipped discharge power as deficit, and x is
/// re-derived from the realised v. The projection is total: any finite x is
/// accepted.
DispatchSolution project_constraints(const SampledSeries& x, const BatteryParams& params,
                                     double initial_energy_kwh);

/// Constrained storage model: solves the first-kind equation
/// integral K(t,tau,x) dtau = imbalance(t) for the power ramp x (Lavrentiev
/// regularised when opts.alpha > 0), then forms v and the stored energy by
/// cumulative midpoint integration under project_constraints.
///
/// `imbalance` is a node series (kW). A nonzero first sample is treated as a
/// baseline: the series is shifted so f(t0) = 0, and the baseline re-enters
/// the first node's equation as an initial power step, which reproduces the
/// unshifted imbalance exactly for constant kernels.
DispatchSolution volterra_soc_solve(const SampledSeries& imbalance, const PiecewiseKernel& kernel,
                                    const BatteryParams& params, const VolterraSocOpts& opts = {});

} // namespace vsim
