#include "vsim/theorem.hpp"

#include <cmath>

namespace vsim {

ConditionReport check_theorem1_condition(const PiecewiseKernel& kernel,
                                         std::span<const double> boundary_derivatives_at_0) {
    const auto& segs = kernel.segments();
    const std::size_t n = segs.size();
    if (boundary_derivatives_at_0.size() != n - 1) {
        throw HypothesisError("expected " + std::to_string(n - 1) +
                              " boundary derivatives alpha_i'(0), got " +
                              std::to_string(boundary_derivatives_at_0.size()));
    }

    ConditionReport report;

    const double k_last = segs.back().factor(0.0, 0.0);
    if (k_last == 0.0 || !std::isfinite(k_last)) {
        throw HypothesisError("K_n(0,0) must be nonzero and finite (got " +
                              std::to_string(k_last) + ")");
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double at0 = segs[i].upper(0.0);
        if (std::abs(at0) > 1e-12) {
            report.violations.push_back("alpha_" + std::to_string(i + 1) +
                                        "(0) = " + std::to_string(at0) + ", expected 0");
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (boundary_derivatives_at_0[i] < 0.0) {
            report.violations.push_back("alpha_" + std::to_string(i + 1) +
                                        "'(0) is negative");
        }
    }

    report.lhs = segs.back().lipschitz_q;
    report.per_segment_terms.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double k_i = segs[i].factor(0.0, 0.0);
        const double k_next = segs[i + 1].factor(0.0, 0.0);
        const double term = boundary_derivatives_at_0[i] *
                            std::abs((k_i - k_next) / k_last) * (1.0 + segs[i].lipschitz_q);
        report.per_segment_terms.push_back(term);
        report.lhs += term;
    }

    report.satisfied = report.lhs < 1.0;
    return report;
}

} // namespace vsim
