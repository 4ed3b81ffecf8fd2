#pragma once

#include <vector>

#include "vsim/kernel.hpp"
#include "vsim/series.hpp"

namespace vsim {

/// Options for the sequential node solvers.
struct SolverOpts {
    double node_tol = 1e-10;      // successive-approximation tolerance per node
    int max_iters = 50;           // iteration budget per node before bisection gives up
    double diag_eps_rel = 1e-12;  // singularity guard, relative to sup|K| seen on the grid
};

/// Result of an inverse solve. `x` holds midpoint values; `residual` is the
/// discrete L2 defect of the forward-applied solution against the right-hand
/// side. `iterations_per_node` is populated for nonlinear kernels only
/// (zero at nodes whose diagonal segment is linear).
struct Solution {
    SampledSeries x;
    double residual = 0.0;
    std::vector<int> iterations_per_node;
};

/// Nonlinear node iteration ran out of budget. Carries the solution prefix
/// computed so far (remaining midpoints are zero).
struct ConvergenceError : NumericalError {
    ConvergenceError(std::size_t node, Solution partial_)
        : NumericalError("node iteration did not converge at node " + std::to_string(node)),
          node_index(node), partial(std::move(partial_)) {}
    std::size_t node_index;
    Solution partial;
};

/// Midpoint-rule evaluation of the direct problem
///   f(t_k) = integral_0^{t_k} K(t_k, tau, x(tau)) dtau,
/// with x sampled at the midpoints of its grid. The returned node series has
/// one more sample than x and starts with f(t0) = 0.
SampledSeries forward_apply(const PiecewiseKernel& kernel, const SampledSeries& x);

/// Solves the first-kind equation integral_0^t K(t,tau,x(tau)) dtau = f(t)
/// by sequential midpoint quadrature. f is a node series with f(t0) = 0; the
/// solution is returned at cell midpoints (one sample fewer than f).
///
/// Linear segments are inverted directly; nonlinear ones are solved per node
/// by secant-damped successive approximations with a widening-bracket
/// bisection fallback.
Solution solve_vie_first_kind(const PiecewiseKernel& kernel, const SampledSeries& f,
                              const SolverOpts& opts = {});

/// Lavrentiev-regularised solve of the same problem:
///   alpha * x(t) + integral_0^t K(t,tau) x(tau) dtau = f(t).
/// Requires a linear kernel and alpha >= 0; alpha = 0 reproduces
/// solve_vie_first_kind exactly (same arithmetic path).
Solution solve_vie_lavrentiev(const PiecewiseKernel& kernel, const SampledSeries& f,
                              double alpha, const SolverOpts& opts = {});

/// Discrete L2 norm of forward_apply(kernel, x) - f. f must be the node
/// series matching the cell series x.
double residual_norm(const PiecewiseKernel& kernel, const SampledSeries& x,
                     const SampledSeries& f);

} // namespace vsim
