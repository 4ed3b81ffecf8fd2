#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "vsim/vie.hpp"

using namespace vsim;

namespace {

SampledSeries node_series(double t0, double h, std::size_t n, double (*fn)(double)) {
    SampledSeries s = SampledSeries::zeros(Grid{t0, h, n});
    for (std::size_t k = 0; k < n; ++k) s.values[k] = fn(s.grid.node(k));
    return s;
}

SampledSeries midpoint_series(double t0, double h, std::size_t n, double (*fn)(double)) {
    SampledSeries s = SampledSeries::zeros(Grid{t0, h, n});
    for (std::size_t j = 0; j < n; ++j) s.values[j] = fn(s.grid.midpoint(j));
    return s;
}

double sup_diff(const SampledSeries& a, const SampledSeries& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

/// Two-piece kernel: factor 2 below tau = t/2, factor 1 above.
PiecewiseKernel two_piece_kernel() {
    KernelSegment lo;
    lo.lower = [](double) { return 0.0; };
    lo.upper = [](double t) { return 0.5 * t; };
    lo.factor = [](double, double) { return 2.0; };
    KernelSegment hi;
    hi.lower = [](double t) { return 0.5 * t; };
    hi.upper = [](double t) { return t; };
    hi.factor = [](double, double) { return 1.0; };
    return PiecewiseKernel({lo, hi});
}

} // namespace

TEST_CASE("forward_apply: unit kernel integrates a constant exactly") {
    const auto kernel = PiecewiseKernel::constant(1.0);
    const auto x = midpoint_series(0.0, 0.1, 10, [](double) { return 1.0; });
    const auto f = forward_apply(kernel, x);
    REQUIRE(f.size() == 11);
    CHECK(f.values[0] == 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        CHECK(f.values[k] == doctest::Approx(f.grid.node(k)).epsilon(1e-12));
    }
}

TEST_CASE("forward_apply: zero input gives zero output") {
    const auto kernel = PiecewiseKernel::constant(1.0);
    const auto x = midpoint_series(0.0, 0.1, 10, [](double) { return 0.0; });
    const auto f = forward_apply(kernel, x);
    for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("forward_apply: exponential kernel matches the closed form to O(h^2)") {
    // K(t,tau) = exp(t - tau), x(tau) = tau: integral is exp(t) - t - 1.
    const auto kernel = PiecewiseKernel::single([](double t, double tau) { return std::exp(t - tau); });
    const auto x = midpoint_series(0.0, 0.01, 100, [](double tau) { return tau; });
    const auto f = forward_apply(kernel, x);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double t = f.grid.node(k);
        worst = std::max(worst, std::abs(f.values[k] - (std::exp(t) - t - 1.0)));
    }
    // Midpoint rule error ~ h^2/24 * max|d^2/dtau^2| * t ~ 1.1e-5 at t = 1.
    CHECK(worst < 2e-5);
    CHECK(worst > 1e-7); // sanity: quadrature, not the exact antiderivative
}

TEST_CASE("forward_apply: non-finite kernel evaluation names the point") {
    const auto kernel = PiecewiseKernel::single(
        [](double, double tau) { return tau > 0.25 ? std::numeric_limits<double>::infinity() : 1.0; });
    const auto x = midpoint_series(0.0, 0.1, 5, [](double) { return 1.0; });
    CHECK_THROWS_AS((void)forward_apply(kernel, x), EvaluationError);
}

TEST_CASE("solve: unit kernel with f(t) = t recovers x == 1") {
    const auto kernel = PiecewiseKernel::constant(1.0);
    const auto f = node_series(0.0, 0.1, 11, [](double t) { return t; });
    const auto sol = solve_vie_first_kind(kernel, f);
    REQUIRE(sol.x.size() == 10);
    for (double v : sol.x.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.residual < 1e-14);
    CHECK(sol.iterations_per_node.empty()); // linear path
}

TEST_CASE("solve: midpoint rule inverts linear integrands exactly") {
    // f(t) = t^2/2 = integral of tau; recovered x_j equals the midpoints.
    const auto kernel = PiecewiseKernel::constant(1.0);
    const auto f = node_series(0.0, 0.1, 11, [](double t) { return 0.5 * t * t; });
    const auto sol = solve_vie_first_kind(kernel, f);
    for (std::size_t j = 0; j < sol.x.size(); ++j) {
        CHECK(sol.x.values[j] == doctest::Approx(sol.x.grid.midpoint(j)).epsilon(1e-12));
    }
}

TEST_CASE("solve: forward-inverse round trip on a seeded random input") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SampledSeries x = SampledSeries::zeros(Grid{0.0, 0.02, 50});
    for (double& v : x.values) v = dist(rng);

    const auto kernel =
        PiecewiseKernel::single([](double t, double tau) { return 1.0 + 0.3 * std::sin(t + tau); });
    const auto f = forward_apply(kernel, x);
    const auto sol = solve_vie_first_kind(kernel, f);
    CHECK(sup_diff(sol.x, x) < 1e-10);
}

TEST_CASE("solve: piecewise kernel round trip and boundary membership") {
    const auto kernel = two_piece_kernel();

    // Hand quadrature of x == 1 with the half-open membership rule:
    // even k splits the midpoints evenly, odd k puts the middle one above.
    const double h = 0.1;
    const auto x = midpoint_series(0.0, h, 10, [](double) { return 1.0; });
    const auto f = forward_apply(kernel, x);
    for (std::size_t k = 1; k <= 10; ++k) {
        std::size_t below = 0;
        for (std::size_t j = 1; j <= k; ++j) {
            if ((j - 0.5) * h < 0.5 * k * h) ++below;
        }
        const double expected = h * (2.0 * below + 1.0 * (k - below));
        CHECK(f.values[k] == doctest::Approx(expected).epsilon(1e-12));
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SampledSeries xr = SampledSeries::zeros(Grid{0.0, 0.05, 40});
    for (double& v : xr.values) v = dist(rng);
    const auto sol = solve_vie_first_kind(kernel, forward_apply(kernel, xr));
    CHECK(sup_diff(sol.x, xr) < 1e-10);
}

TEST_CASE("solve: nonlinear kernel G(x) = x^3 recovers a manufactured solution") {
    // integral of cos^3 = sin - sin^3/3, solved exactly in closed form.
    const auto kernel = PiecewiseKernel::single_nonlinear(
        [](double, double) { return 1.0; },
        [](double, double x) { return x * x * x; }, 3.0);
    const auto f = node_series(0.0, 0.01, 101,
                               [](double t) { return std::sin(t) - std::pow(std::sin(t), 3) / 3.0; });
    const auto sol = solve_vie_first_kind(kernel, f);
    REQUIRE(sol.iterations_per_node.size() == 100);
    double worst = 0.0;
    for (std::size_t j = 0; j < sol.x.size(); ++j) {
        worst = std::max(worst, std::abs(sol.x.values[j] - std::cos(sol.x.grid.midpoint(j))));
    }
    CHECK(worst < 5e-4); // O(h^2) recovery of the midpoint samples
    for (int it : sol.iterations_per_node) CHECK(it <= 50);
}

TEST_CASE("solve: rejects f with nonzero start and near-singular diagonals") {
    const auto kernel = PiecewiseKernel::constant(1.0);
    auto f = node_series(0.0, 0.1, 11, [](double t) { return t + 1.0; });
    CHECK_THROWS_AS((void)solve_vie_first_kind(kernel, f), ConfigError);

    // Diagonal factor far below the scale-aware guard.
    KernelSegment lo;
    lo.lower = [](double) { return 0.0; };
    lo.upper = [](double t) { return 0.5 * t; };
    lo.factor = [](double, double) { return 1.0; };
    KernelSegment hi;
    hi.lower = lo.upper;
    hi.upper = [](double t) { return t; };
    hi.factor = [](double, double) { return 1e-20; };
    const PiecewiseKernel vanishing({lo, hi});
    const auto g = node_series(0.0, 0.1, 11, [](double t) { return t * t; });
    CHECK_THROWS_AS((void)solve_vie_first_kind(vanishing, g), SingularKernelError);
}

TEST_CASE("solve: piecewise kernel with a nonlinear segment round-trips") {
    // Jump at tau = t/2; the upper segment carries G(x) = x + 0.2 sin x,
    // strictly monotone so every node equation has a unique root.
    KernelSegment lo;
    lo.lower = [](double) { return 0.0; };
    lo.upper = [](double t) { return 0.5 * t; };
    lo.factor = [](double, double) { return 1.5; };
    lo.lipschitz_q = 1.0;
    KernelSegment hi;
    hi.lower = lo.upper;
    hi.upper = [](double t) { return t; };
    hi.factor = [](double, double) { return 1.0; };
    hi.nonlinearity = [](double, double x) { return x + 0.2 * std::sin(x); };
    hi.lipschitz_q = 1.2;
    const PiecewiseKernel kernel({lo, hi});

    SampledSeries x = SampledSeries::zeros(Grid{0.0, 0.02, 50});
    for (std::size_t j = 0; j < x.size(); ++j) {
        x.values[j] = 0.8 * std::cos(3.0 * x.grid.midpoint(j));
    }
    const auto f = forward_apply(kernel, x);
    const auto sol = solve_vie_first_kind(kernel, f);
    CHECK(sup_diff(sol.x, x) < 1e-9);
}

TEST_CASE("solve: impossible node equation raises a non-convergence error") {
    // G(x) = exp(x) is strictly positive, so a negative right-hand side has
    // no root at the first node; the partial solution travels in the error.
    const auto kernel = PiecewiseKernel::single_nonlinear(
        [](double, double) { return 1.0 ; },
        [](double, double x) { return std::exp(x); }, 10.0);
    SampledSeries f = SampledSeries::zeros(Grid{0.0, 0.1, 6});
    for (std::size_t k = 1; k < f.size(); ++k) f.values[k] = -1.0;
    try {
        (void)solve_vie_first_kind(kernel, f);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.node_index == 1);
        CHECK(e.partial.x.size() == 5);
    }
}

TEST_CASE("solve: convergence order two on a smooth manufactured problem") {
    // K(t,tau) = exp(t - tau), x = sin(tau), f = (exp(t) - sin t - cos t)/2.
    const auto kernel = PiecewiseKernel::single([](double t, double tau) { return std::exp(t - tau); });
    auto rhs = [](double t) { return 0.5 * (std::exp(t) - std::sin(t) - std::cos(t)); };

    double prev_err = 0.0;
    std::vector<double> errs;
    for (std::size_t m : {50, 100, 200, 400}) {
        const double h = 1.0 / static_cast<double>(m);
        SampledSeries f = SampledSeries::zeros(Grid{0.0, h, m + 1});
        for (std::size_t k = 0; k <= m; ++k) f.values[k] = rhs(f.grid.node(k));
        const auto sol = solve_vie_first_kind(kernel, f);
        double worst = 0.0;
        for (std::size_t j = 0; j < sol.x.size(); ++j) {
            worst = std::max(worst, std::abs(sol.x.values[j] - std::sin(sol.x.grid.midpoint(j))));
        }
        errs.push_back(worst);
        prev_err = worst;
    }
    (void)prev_err;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double ratio = errs[i - 1] / errs[i];
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }
}

TEST_CASE("residual_norm: exact pair, hand-computed norm, homogeneity") {
    const auto kernel = PiecewiseKernel::constant(1.0);
    const auto x = midpoint_series(0.0, 0.1, 10, [](double) { return 1.0; });
    const auto f = forward_apply(kernel, x);
    CHECK(residual_norm(kernel, x, f) < 1e-12);

    // x == 0 against f(t) = t: norm is sqrt(h * sum t_k^2), summed by hand.
    const auto zero = midpoint_series(0.0, 0.1, 10, [](double) { return 0.0; });
    const auto ramp = node_series(0.0, 0.1, 11, [](double t) { return t; });
    double acc = 0.0;
    for (std::size_t k = 0; k <= 10; ++k) acc += (0.1 * k) * (0.1 * k);
    CHECK(residual_norm(kernel, zero, ramp) == doctest::Approx(std::sqrt(0.1 * acc)).epsilon(1e-12));

    auto doubled = ramp;
    for (double& v : doubled.values) v *= 2.0;
    CHECK(residual_norm(kernel, zero, doubled) ==
          doctest::Approx(2.0 * residual_norm(kernel, zero, ramp)).epsilon(1e-12));

    const auto mismatched = midpoint_series(0.0, 0.1, 5, [](double) { return 0.0; });
    CHECK_THROWS_AS((void)residual_norm(kernel, mismatched, ramp), ShapeError);
}

TEST_CASE("solve: concurrent solves on a shared kernel agree with serial ones") {
    const auto kernel =
        PiecewiseKernel::single([](double t, double tau) { return 1.0 + 0.25 * std::cos(t - tau); });
    std::vector<SampledSeries> rhs;
    for (int i = 0; i < 8; ++i) {
        SampledSeries f = SampledSeries::zeros(Grid{0.0, 0.02, 101});
        for (std::size_t k = 1; k < f.size(); ++k) {
            f.values[k] = std::sin((0.3 + 0.1 * i) * f.grid.node(k));
        }
        rhs.push_back(std::move(f));
    }

    std::vector<Solution> serial;
    for (const auto& f : rhs) serial.push_back(solve_vie_first_kind(kernel, f));

    std::vector<Solution> parallel(rhs.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        pool.emplace_back([&, i] { parallel[i] = solve_vie_first_kind(kernel, rhs[i]); });
    }
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < rhs.size(); ++i) {
        REQUIRE(parallel[i].x.size() == serial[i].x.size());
        for (std::size_t j = 0; j < serial[i].x.size(); ++j) {
            CHECK(parallel[i].x.values[j] == serial[i].x.values[j]);
        }
    }
}

TEST_CASE("solution residual agrees with residual_norm") {
    const auto kernel = PiecewiseKernel::single([](double t, double tau) { return 1.0 + 0.1 * t * tau; });
    const auto f = node_series(0.0, 0.05, 21, [](double t) { return std::sin(t); });
    auto shifted = f;
    shifted.values[0] = 0.0;
    const auto sol = solve_vie_first_kind(kernel, shifted);
    CHECK(std::abs(sol.residual - residual_norm(kernel, sol.x, shifted)) <= 1e-14);
}
