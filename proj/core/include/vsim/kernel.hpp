#pragma once

#include <functional>
#include <vector>

#include "vsim/series.hpp"

namespace vsim {

using BoundaryFn = std::function<double(double)>;          // t -> tau
using FactorFn = std::function<double(double, double)>;    // (t, tau) -> K_i
using NonlinearityFn = std::function<double(double, double)>; // (tau, x) -> G_i

/// One piece of a jump-discontinuous kernel, active on the region
/// lower(t) <= tau < upper(t) (the final segment is closed on the right).
///
/// `nonlinearity` left empty means G_i(tau, x) = x, i.e. a linear segment.
/// `lipschitz_q` is the Lipschitz constant of G_i in x, used only by the
/// solvability check; the identity has q = 1.
struct KernelSegment {
    BoundaryFn lower;
    BoundaryFn upper;
    FactorFn factor;
    NonlinearityFn nonlinearity;
    double lipschitz_q = 1.0;

    bool linear() const { return !nonlinearity; }
};

/// Kernel K(t, tau, x) of a first-kind Volterra equation, given as ordered
/// segments whose boundary curves are nested: 0 < alpha_1(t) < ... < t.
/// Boundary membership is half-open at the dividing curves so a quadrature
/// point on a curve lands deterministically in the upper segment.
class PiecewiseKernel {
public:
    explicit PiecewiseKernel(std::vector<KernelSegment> segments);

    /// Single-segment kernel with constant factor. G is the identity.
    static PiecewiseKernel constant(double value);

    /// Single-segment kernel K(t, tau), G identity, covering 0 <= tau <= t.
    static PiecewiseKernel single(FactorFn factor);

    /// Single-segment kernel with nonlinearity G(tau, x) and its Lipschitz
    /// constant.
    static PiecewiseKernel single_nonlinear(FactorFn factor, NonlinearityFn g, double lipschitz_q);

    const std::vector<KernelSegment>& segments() const { return segments_; }
    std::size_t segment_count() const { return segments_.size(); }

    /// True when every segment has the identity nonlinearity.
    bool linear() const;

    /// Index of the segment whose region contains (t, tau).
    std::size_t segment_index(double t, double tau) const;

    /// Factor K_i(t, tau) of the segment containing (t, tau).
    /// Throws EvaluationError on non-finite values.
    double factor_at(double t, double tau) const;

    /// Full kernel value K_i(t, tau) * G_i(tau, x).
    double value(double t, double tau, double x) const;

    /// Applies G of the segment containing (t, tau); identity for linear
    /// segments.
    double nonlinearity_at(double t, double tau, double x) const;

    /// Checks the structural invariants on the concrete grid: nested
    /// boundaries at every node and the boundary conditions alpha_i(0) = 0
    /// when the grid starts at 0. Throws ConfigError on violation.
    void validate_on_grid(const Grid& grid) const;

private:
    std::vector<KernelSegment> segments_;
};

/// Largest |K_i(t_k, tau_k)| over the grid diagonal (tau_k the midpoint of
/// cell k, paired with node t_{k+1}). Used to scale singularity guards and
/// regularisation brackets.
double sup_abs_diagonal_factor(const PiecewiseKernel& kernel, const Grid& cell_grid);

} // namespace vsim
