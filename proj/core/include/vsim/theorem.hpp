#pragma once

#include <span>
#include <string>
#include <vector>

#include "vsim/kernel.hpp"

namespace vsim {

/// Outcome of the local-solvability check for jump-discontinuous kernels.
/// `lhs` is the value of
///   q_n + sum_{i=1..n-1} alpha_i'(0) |K_n(0,0)^{-1} (K_i(0,0) - K_{i+1}(0,0))| (1 + q_i)
/// and the condition is satisfied iff lhs < 1 (strict).
struct ConditionReport {
    double lhs = 0.0;
    bool satisfied = false;
    std::vector<double> per_segment_terms;   // the n-1 summands, in segment order
    std::vector<std::string> violations;     // structural hypothesis failures
};

/// Evaluates the solvability condition. `boundary_derivatives_at_0` supplies
/// alpha_i'(0) for the n-1 interior boundaries, in segment order; Lipschitz
/// constants q_i come from the kernel segments.
///
/// Throws HypothesisError when K_n(0,0) = 0 (the formula is undefined) or
/// when the derivative count does not match the segment count.
ConditionReport check_theorem1_condition(const PiecewiseKernel& kernel,
                                         std::span<const double> boundary_derivatives_at_0);

} // namespace vsim
