#include "vsim/vie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vsim {

namespace {

Grid cell_grid_for(const SampledSeries& f) {
    if (f.grid.n < 2) {
        throw ConfigError("right-hand side needs at least 2 node samples to solve");
    }
    return Grid{f.grid.t0, f.grid.h, f.grid.n - 1};
}

void require_f0_zero(const SampledSeries& f) {
    const double scale = std::max(1.0, sup_abs(f.values));
    if (std::abs(f.values.front()) > 1e-9 * scale) {
        throw ConfigError("right-hand side must satisfy f(t0) = 0 (got f(t0) = " +
                          std::to_string(f.values.front()) +
                          "); shift the baseline before solving");
    }
}

/// Solves h * k_diag * G(tau, xi) = rhs for xi at one node. Successive
/// approximations with a secant slope estimate; geometric-widening bisection
/// when the iteration stalls. Trial evaluations may leave G's domain (over-
/// flow, NaN); such probes steer the search instead of aborting it, and an
/// unresolvable node surfaces as NaN for the caller to convert into a
/// convergence error.
double solve_node_scalar(const KernelSegment& seg, double tau, double k_diag, double h,
                         double rhs, double x_guess, const SolverOpts& opts,
                         int& iterations_used) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    auto phi = [&](double xi) -> double {
        if (!std::isfinite(xi)) return kNaN;
        const double g = seg.linear() ? xi : seg.nonlinearity(tau, xi);
        return h * k_diag * g - rhs; // may be non-finite; callers check
    };

    double x0 = x_guess;
    double x1 = x_guess + std::max(1e-6, 1e-6 * std::abs(x_guess));
    double f0 = phi(x0);
    double f1 = phi(x1);
    iterations_used = 0;

    if (std::isfinite(f0) && std::isfinite(f1)) {
        for (int it = 0; it < opts.max_iters; ++it) {
            ++iterations_used;
            const double slope = (f1 - f0) / (x1 - x0);
            if (!std::isfinite(slope) || std::abs(slope) < 1e-300) break;
            const double x2 = x1 - f1 / slope;
            if (!std::isfinite(x2)) break;
            if (std::abs(x2 - x1) <= opts.node_tol * std::max(1.0, std::abs(x2))) {
                return x2;
            }
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = phi(x1);
            if (!std::isfinite(f1)) break;
        }
    }

    // Bisection fallback on a geometrically widened bracket around the best
    // finite iterate seen so far.
    double center = x_guess;
    if (std::isfinite(f1) && (!std::isfinite(f0) || std::abs(f1) < std::abs(f0))) {
        center = x1;
    } else if (std::isfinite(f0)) {
        center = x0;
    }
    double width = std::max(1.0, std::abs(center));
    double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
    bool bracketed = false;
    for (int widenings = 0; widenings < 64; ++widenings) {
        ++iterations_used;
        lo = center - width;
        hi = center + width;
        flo = phi(lo);
        fhi = phi(hi);
        if (!std::isfinite(flo) || !std::isfinite(fhi)) break;
        if (flo * fhi <= 0.0) {
            bracketed = true;
            break;
        }
        width *= 2.0;
    }
    if (!bracketed) return kNaN;

    for (int it = 0; it < 200; ++it) {
        ++iterations_used;
        const double mid = 0.5 * (lo + hi);
        const double fmid = phi(mid);
        if (!std::isfinite(fmid)) return kNaN;
        if (std::abs(hi - lo) <= opts.node_tol * std::max(1.0, std::abs(mid)) || fmid == 0.0) {
            return mid;
        }
        if (flo * fmid <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Shared sequential sweep. With alpha = 0 and a linear kernel this is the
/// plain first-kind quadrature inversion; nonlinear segments take the node
/// iteration path (only reachable with alpha = 0).
Solution sweep(const PiecewiseKernel& kernel, const SampledSeries& f, double alpha,
               const SolverOpts& opts) {
    validate_grid(f.grid);
    require_finite(f, "right-hand side");
    require_f0_zero(f);
    kernel.validate_on_grid(cell_grid_for(f));

    const Grid cells = cell_grid_for(f);
    const double h = cells.h;
    const bool linear = kernel.linear();

    SampledSeries x = SampledSeries::zeros(cells);
    std::vector<int> iters;
    if (!linear) iters.assign(cells.n, 0);

    double sup_factor = 0.0; // running sup|K_i| over evaluated pairs, scales the guard

    for (std::size_t k = 0; k < cells.n; ++k) {
        const double t = cells.node(k + 1);

        double lag = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double tau = cells.midpoint(j);
            const auto& seg = kernel.segments()[kernel.segment_index(t, tau)];
            const double fac = seg.factor(t, tau);
            const double g = seg.linear() ? x.values[j] : seg.nonlinearity(tau, x.values[j]);
            if (!std::isfinite(fac) || !std::isfinite(g)) {
                throw EvaluationError(t, tau, "kernel evaluation is not finite");
            }
            sup_factor = std::max(sup_factor, std::abs(fac));
            lag += fac * g;
        }

        const double tau_k = cells.midpoint(k);
        const auto& diag_seg = kernel.segments()[kernel.segment_index(t, tau_k)];
        const double k_diag = diag_seg.factor(t, tau_k);
        if (!std::isfinite(k_diag)) throw EvaluationError(t, tau_k, "diagonal factor is not finite");
        sup_factor = std::max(sup_factor, std::abs(k_diag));

        const double rhs = f.values[k + 1] - h * lag;
        const double diag_eps = opts.diag_eps_rel * std::max(sup_factor, 1e-300);

        if (diag_seg.linear()) {
            const double denom = alpha + h * k_diag;
            if (std::abs(denom) < diag_eps) {
                throw SingularKernelError(k + 1, std::abs(denom), diag_eps);
            }
            x.values[k] = rhs / denom;
        } else {
            if (std::abs(k_diag) < diag_eps) {
                throw SingularKernelError(k + 1, std::abs(k_diag), diag_eps);
            }
            const double guess = k > 0 ? x.values[k - 1] : rhs / (h * k_diag);
            int used = 0;
            const double xi = solve_node_scalar(diag_seg, tau_k, k_diag, h, rhs, guess, opts, used);
            iters[k] = used;
            if (!std::isfinite(xi)) {
                Solution partial;
                partial.x = x;
                partial.iterations_per_node = iters;
                throw ConvergenceError(k + 1, std::move(partial));
            }
            x.values[k] = xi;
        }
    }

    Solution sol;
    sol.x = std::move(x);
    sol.iterations_per_node = std::move(iters);
    sol.residual = residual_norm(kernel, sol.x, f);
    return sol;
}

} // namespace

SampledSeries forward_apply(const PiecewiseKernel& kernel, const SampledSeries& x) {
    validate_grid(x.grid);
    require_finite(x, "solution series");
    kernel.validate_on_grid(x.grid);

    const Grid nodes{x.grid.t0, x.grid.h, x.grid.n + 1};
    SampledSeries f = SampledSeries::zeros(nodes);
    const double h = x.grid.h;
    for (std::size_t k = 1; k < nodes.n; ++k) {
        const double t = nodes.node(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            acc += kernel.value(t, x.grid.midpoint(j), x.values[j]);
        }
        f.values[k] = h * acc;
    }
    return f;
}

Solution solve_vie_first_kind(const PiecewiseKernel& kernel, const SampledSeries& f,
                              const SolverOpts& opts) {
    return sweep(kernel, f, 0.0, opts);
}

Solution solve_vie_lavrentiev(const PiecewiseKernel& kernel, const SampledSeries& f,
                              double alpha, const SolverOpts& opts) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("lavrentiev solve requires alpha >= 0 (got " + std::to_string(alpha) + ")");
    }
    if (!kernel.linear()) {
        throw ConfigError("lavrentiev solve supports linear kernels only");
    }
    return sweep(kernel, f, alpha, opts);
}

double residual_norm(const PiecewiseKernel& kernel, const SampledSeries& x,
                     const SampledSeries& f) {
    require_nodes_over_cells(f, x);
    SampledSeries reproduced = forward_apply(kernel, x);
    double acc = 0.0;
    for (std::size_t k = 0; k < f.grid.n; ++k) {
        const double d = reproduced.values[k] - f.values[k];
        acc += d * d;
    }
    return std::sqrt(f.grid.h * acc);
}

} // namespace vsim
