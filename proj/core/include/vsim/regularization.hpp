#pragma once

#include "vsim/vie.hpp"

namespace vsim {

/// Search bracket and constants for the discrepancy principle. The bracket is
/// dimensionless by default, in units of h * sup|K| on the grid diagonal, so
/// the same defaults work across problem scales.
struct AlphaSearchOpts {
    double alpha_lo = 1e-8;
    double alpha_hi = 1e+2;
    double c = 1.0;            // target residual = c * delta
    double rel_tol = 1e-3;     // relative alpha tolerance of the bisection
    bool scale_by_h_supk = true;
    SolverOpts solver;
};

/// Picks the Lavrentiev parameter alpha so that the discrete L2 residual of
/// x_alpha matches c * delta, by bisection on the monotone residual map.
/// delta is the estimated noise level in the same units and norm as f.
///
/// Returns alpha_lo when the residual there already exceeds the target
/// (noise-free data); throws BracketError when even alpha_hi leaves the
/// residual below the target.
double select_alpha_discrepancy(const PiecewiseKernel& kernel, const SampledSeries& f,
                                double delta, const AlphaSearchOpts& search = {});

} // namespace vsim
