#include "vsim/series.hpp"

#include <cmath>
#include <string>

namespace vsim {

SampledSeries::SampledSeries(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    validate_grid(grid);
    if (values.size() != grid.n) {
        throw ShapeError("series has " + std::to_string(values.size()) +
                         " values but grid declares n = " + std::to_string(grid.n));
    }
}

SampledSeries SampledSeries::zeros(Grid g) {
    validate_grid(g);
    return SampledSeries(g, std::vector<double>(g.n, 0.0));
}

void validate_grid(const Grid& grid) {
    if (!(grid.h > 0.0) || !std::isfinite(grid.h) || !std::isfinite(grid.t0)) {
        throw ConfigError("grid requires finite t0 and h > 0 (got t0 = " +
                          std::to_string(grid.t0) + ", h = " + std::to_string(grid.h) + ")");
    }
    if (grid.n < 1) {
        throw ConfigError("grid requires n >= 1");
    }
}

namespace {

bool spacing_matches(const Grid& a, const Grid& b) {
    const double scale = std::max(std::abs(a.h), std::abs(b.h));
    return std::abs(a.h - b.h) <= 1e-12 * scale && std::abs(a.t0 - b.t0) <= 1e-9;
}

} // namespace

void require_same_grid(const SampledSeries& a, const SampledSeries& b) {
    if (a.grid.n != b.grid.n || !spacing_matches(a.grid, b.grid)) {
        throw ShapeError("series grids differ (n = " + std::to_string(a.grid.n) + " vs " +
                         std::to_string(b.grid.n) + ", h = " + std::to_string(a.grid.h) +
                         " vs " + std::to_string(b.grid.h) + ")");
    }
}

void require_nodes_over_cells(const SampledSeries& nodes, const SampledSeries& cells) {
    if (nodes.grid.n != cells.grid.n + 1 || !spacing_matches(nodes.grid, cells.grid)) {
        throw ShapeError("node series of length " + std::to_string(nodes.grid.n) +
                         " does not cover cell series of length " +
                         std::to_string(cells.grid.n));
    }
}

double sup_abs(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const SampledSeries& s) {
    double acc = 0.0;
    for (double v : s.values) acc += v * v;
    return std::sqrt(s.grid.h * acc);
}

SampledSeries cumulative_integral(const SampledSeries& s, double initial) {
    SampledSeries out = s;
    double acc = initial;
    for (std::size_t j = 0; j < s.size(); ++j) {
        acc += s.grid.h * s.values[j];
        out.values[j] = acc;
    }
    return out;
}

void require_finite(const SampledSeries& s, const char* what) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s.values[i])) {
            throw ConfigError(std::string(what) + " contains a non-finite value at index " +
                              std::to_string(i));
        }
    }
}

} // namespace vsim
