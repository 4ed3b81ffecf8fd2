#include "vsim/regularization.hpp"

#include <cmath>
#include <string>

namespace vsim {

double select_alpha_discrepancy(const PiecewiseKernel& kernel, const SampledSeries& f,
                                double delta, const AlphaSearchOpts& search) {
    if (!(delta > 0.0)) {
        throw ConfigError("discrepancy principle requires delta > 0 (got " +
                          std::to_string(delta) + ")");
    }
    if (!(search.alpha_lo > 0.0) || !(search.alpha_hi > search.alpha_lo)) {
        throw ConfigError("alpha bracket must satisfy 0 < alpha_lo < alpha_hi");
    }

    double scale = 1.0;
    if (search.scale_by_h_supk) {
        const Grid cells{f.grid.t0, f.grid.h, f.grid.n > 1 ? f.grid.n - 1 : 1};
        scale = f.grid.h * std::max(sup_abs_diagonal_factor(kernel, cells), 1e-300);
    }
    double lo = search.alpha_lo * scale;
    double hi = search.alpha_hi * scale;
    const double target = search.c * delta;

    auto rho = [&](double alpha) {
        return solve_vie_lavrentiev(kernel, f, alpha, search.solver).residual;
    };

    const double rho_lo = rho(lo);
    if (rho_lo >= target) return lo;
    const double rho_hi = rho(hi);
    if (rho_hi < target) throw BracketError(rho_lo, rho_hi, target);

    // Geometric bisection: the residual grows monotonically with alpha, and a
    // relative alpha tolerance is natural across the orders of magnitude the
    // bracket spans.
    double flo = rho_lo;
    double fhi = rho_hi;
    while (hi / lo > 1.0 + search.rel_tol) {
        const double mid = std::sqrt(lo * hi);
        const double fmid = rho(mid);
        if (fmid < target) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    return std::abs(flo - target) < std::abs(fhi - target) ? lo : hi;
}

} // namespace vsim
