#include "vsim/kernel.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace vsim {

PiecewiseKernel::PiecewiseKernel(std::vector<KernelSegment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw ConfigError("piecewise kernel requires at least one segment");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& seg = segments_[i];
        if (!seg.lower || !seg.upper || !seg.factor) {
            throw ConfigError("kernel segment " + std::to_string(i) +
                              " is missing a boundary or factor function");
        }
        if (seg.lipschitz_q < 0.0) {
            throw ConfigError("kernel segment " + std::to_string(i) + " has lipschitz_q < 0");
        }
    }
}

PiecewiseKernel PiecewiseKernel::constant(double value) {
    return single([value](double, double) { return value; });
}

PiecewiseKernel PiecewiseKernel::single(FactorFn factor) {
    KernelSegment seg;
    seg.lower = [](double) { return 0.0; };
    seg.upper = [](double t) { return t; };
    seg.factor = std::move(factor);
    return PiecewiseKernel({std::move(seg)});
}

PiecewiseKernel PiecewiseKernel::single_nonlinear(FactorFn factor, NonlinearityFn g,
                                                  double lipschitz_q) {
    KernelSegment seg;
    seg.lower = [](double) { return 0.0; };
    seg.upper = [](double t) { return t; };
    seg.factor = std::move(factor);
    seg.nonlinearity = std::move(g);
    seg.lipschitz_q = lipschitz_q;
    return PiecewiseKernel({std::move(seg)});
}

bool PiecewiseKernel::linear() const {
    for (const auto& seg : segments_) {
        if (!seg.linear()) return false;
    }
    return true;
}

std::size_t PiecewiseKernel::segment_index(double t, double tau) const {
    const std::size_t last = segments_.size() - 1;
    for (std::size_t i = 0; i < last; ++i) {
        if (segments_[i].lower(t) <= tau && tau < segments_[i].upper(t)) return i;
    }
    // Last segment is closed on the right so tau == t belongs to it.
    if (segments_[last].lower(t) <= tau && tau <= segments_[last].upper(t)) return last;
    throw EvaluationError(t, tau, "quadrature point lies outside every kernel segment");
}

double PiecewiseKernel::factor_at(double t, double tau) const {
    const double v = segments_[segment_index(t, tau)].factor(t, tau);
    if (!std::isfinite(v)) throw EvaluationError(t, tau, "factor is not finite");
    return v;
}

double PiecewiseKernel::value(double t, double tau, double x) const {
    const auto& seg = segments_[segment_index(t, tau)];
    const double k = seg.factor(t, tau);
    const double g = seg.linear() ? x : seg.nonlinearity(tau, x);
    const double v = k * g;
    if (!std::isfinite(v)) throw EvaluationError(t, tau, "kernel value is not finite");
    return v;
}

double PiecewiseKernel::nonlinearity_at(double t, double tau, double x) const {
    const auto& seg = segments_[segment_index(t, tau)];
    return seg.linear() ? x : seg.nonlinearity(tau, x);
}

void PiecewiseKernel::validate_on_grid(const Grid& grid) const {
    validate_grid(grid);
    if (std::abs(grid.t0) < 1e-12) {
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const double at0 = segments_[i].upper(0.0);
            if (std::abs(at0) > 1e-9) {
                throw ConfigError("kernel boundary alpha_" + std::to_string(i + 1) +
                                  "(0) = " + std::to_string(at0) + " but must vanish at 0");
            }
        }
    }
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.node(k + 1);
        double prev = segments_.front().lower(t);
        if (prev > 1e-9 + grid.t0) {
            throw ConfigError("first kernel boundary does not start at the time origin");
        }
        for (const auto& seg : segments_) {
            const double up = seg.upper(t);
            if (!(up >= prev - 1e-12)) {
                throw ConfigError("kernel boundaries are not nested at t = " + std::to_string(t));
            }
            prev = up;
        }
        if (std::abs(segments_.back().upper(t) - t) > 1e-9) {
            throw ConfigError("last kernel boundary must equal t (got " +
                              std::to_string(segments_.back().upper(t)) + " at t = " +
                              std::to_string(t) + ")");
        }
    }
}

double sup_abs_diagonal_factor(const PiecewiseKernel& kernel, const Grid& cell_grid) {
    double m = 0.0;
    for (std::size_t k = 0; k < cell_grid.n; ++k) {
        const double t = cell_grid.node(k + 1);
        const double tau = cell_grid.midpoint(k);
        m = std::max(m, std::abs(kernel.factor_at(t, tau)));
    }
    return m;
}

} // namespace vsim
