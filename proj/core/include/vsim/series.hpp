#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vsim/errors.hpp"

namespace vsim {

/// Uniform time grid. Times are in hours throughout the library.
///
/// A grid carries nodes t_k = t0 + k*h and cell midpoints
/// tau_j = t0 + (j + 1/2)*h. Whether a series is sampled at nodes or at
/// midpoints is decided by the operation consuming it: right-hand sides f
/// live on nodes (with f(t0) stored explicitly), solutions x of the integral
/// equations live on midpoints, so a node series over m cells has m+1 samples
/// while the matching midpoint series has m.
struct Grid {
    double t0 = 0.0;     // start time (h)
    double h = 1.0;      // step width (h)
    std::size_t n = 0;   // number of samples

    double node(std::size_t k) const { return t0 + static_cast<double>(k) * h; }
    double midpoint(std::size_t j) const { return t0 + (static_cast<double>(j) + 0.5) * h; }

    bool operator==(const Grid&) const = default;
};

/// Uniformly sampled real-valued series; units are declared by context
/// (kW, kWh or kW/h).
struct SampledSeries {
    Grid grid;
    std::vector<double> values;

    SampledSeries() = default;
    SampledSeries(Grid g, std::vector<double> v);

    static SampledSeries zeros(Grid g);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

/// Throws ConfigError unless h > 0, n >= 1 and both are finite.
void validate_grid(const Grid& grid);

/// Throws ShapeError unless the two series share t0, h and length.
void require_same_grid(const SampledSeries& a, const SampledSeries& b);

/// Throws ShapeError unless `nodes` is the node series matching the cell
/// series `cells` (same t0 and h, nodes.n == cells.n + 1).
void require_nodes_over_cells(const SampledSeries& nodes, const SampledSeries& cells);

/// Largest absolute value, 0 for an empty span.
double sup_abs(std::span<const double> values);

/// Discrete L2 norm sqrt(h * sum(v_k^2)).
double l2_norm(const SampledSeries& s);

/// Running integral of a midpoint-sampled series by the midpoint rule:
/// out[k] = initial + h * sum_{j<=k} s[j]. Same grid and length as the input.
SampledSeries cumulative_integral(const SampledSeries& s, double initial = 0.0);

/// Throws ConfigError naming the first non-finite entry, if any.
void require_finite(const SampledSeries& s, const char* what);

} // namespace vsim
