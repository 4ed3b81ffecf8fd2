#include <doctest.h>

#include <cmath>
#include <map>

#include "vsim/metrics.hpp"

using namespace vsim;

TEST_CASE("identical series give zero metrics") {
    const SampledSeries a(Grid{0.0, 1.0, 3}, {1.0, 2.0, 3.0});
    const auto m = compare_models(a, a);
    CHECK(m.rmse == 0.0);
    CHECK(m.mae == 0.0);
    CHECK(m.mape_pct == 0.0);
    CHECK(m.n_points == 3);
    CHECK(m.skipped_zero_denominator == 0);
}

TEST_CASE("two-point hand computation") {
    const SampledSeries a(Grid{0.0, 1.0, 2}, {3.0, 3.0});
    const SampledSeries b(Grid{0.0, 1.0, 2}, {1.0, 1.0});
    const auto m = compare_models(a, b);
    CHECK(m.rmse == doctest::Approx(2.0));
    CHECK(m.mae == doctest::Approx(2.0));
    CHECK(m.mape_pct == doctest::Approx(200.0));
}

TEST_CASE("zero reference points are skipped from MAPE only") {
    const SampledSeries a(Grid{0.0, 1.0, 3}, {2.0, 5.0, 2.0});
    const SampledSeries b(Grid{0.0, 1.0, 3}, {1.0, 0.0, 1.0});
    const auto m = compare_models(a, b);
    CHECK(m.skipped_zero_denominator == 1);
    CHECK(m.mape_pct == doctest::Approx(100.0));           // only the 1.0 references count
    CHECK(m.rmse == doctest::Approx(std::sqrt((1.0 + 25.0 + 1.0) / 3.0)));
    CHECK(m.mae == doctest::Approx(7.0 / 3.0));
}

TEST_CASE("empty and mismatched input is rejected") {
    const SampledSeries a(Grid{0.0, 1.0, 2}, {1.0, 2.0});
    const SampledSeries c(Grid{0.0, 1.0, 3}, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS((void)compare_models(a, c), ShapeError);
}

TEST_CASE("monthly averages: constants and month indices") {
    const std::size_t n = 8760;
    const auto cal = synthetic_year_calendar(n);

    SampledSeries constant = SampledSeries::zeros(Grid{0.0, 1.0, n});
    for (double& v : constant.values) v = 50.0;
    for (double v : monthly_averages(constant, cal)) CHECK(v == doctest::Approx(50.0));

    SampledSeries idx = SampledSeries::zeros(Grid{0.0, 1.0, n});
    for (std::size_t k = 0; k < n; ++k) idx.values[k] = cal.month[k];
    const auto means = monthly_averages(idx, cal);
    for (int m = 0; m < 12; ++m) CHECK(means[m] == doctest::Approx(m + 1.0));
}

TEST_CASE("monthly averages match an independent group-by") {
    const std::size_t n = 8760;
    const auto cal = synthetic_year_calendar(n);
    SampledSeries s = SampledSeries::zeros(Grid{0.0, 1.0, n});
    for (std::size_t k = 0; k < n; ++k) {
        s.values[k] = std::sin(0.001 * static_cast<double>(k)) + 0.1 * static_cast<double>(k % 7);
    }

    std::map<int, std::pair<double, std::size_t>> groups;
    for (std::size_t k = 0; k < n; ++k) {
        auto& [sum, count] = groups[cal.month[k]];
        sum += s.values[k];
        ++count;
    }
    const auto means = monthly_averages(s, cal);
    for (const auto& [month, agg] : groups) {
        CHECK(means[month - 1] == doctest::Approx(agg.first / agg.second).epsilon(1e-12));
    }
}

TEST_CASE("monthly averages: empty month is named") {
    // Half a year only: months 7..12 have no samples.
    const std::size_t n = 24 * 120;
    const auto cal = synthetic_year_calendar(n);
    SampledSeries s = SampledSeries::zeros(Grid{0.0, 1.0, n});
    CHECK_THROWS_WITH_AS((void)monthly_averages(s, cal), doctest::Contains("month"), ConfigError);
}

TEST_CASE("epoch calendar matches known dates") {
    // 2025-01-31T22:00:00Z plus a few hours crosses into February.
    const auto cal = calendar_from_epoch(1738360800, 1.0, 5);
    CHECK(cal.month[0] == 1);
    CHECK(cal.month[1] == 1);
    CHECK(cal.month[2] == 2);
    CHECK(cal.month[4] == 2);
}
