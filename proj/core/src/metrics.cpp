#include "vsim/metrics.hpp"

#include <cmath>
#include <ctime>
#include <string>

namespace vsim {

MetricsReport compare_models(const SampledSeries& candidate, const SampledSeries& reference) {
    require_same_grid(candidate, reference);
    if (candidate.size() == 0) throw ConfigError("cannot compare empty series");

    MetricsReport report;
    report.n_points = candidate.size();
    double sq = 0.0;
    double abs_sum = 0.0;
    double pct_sum = 0.0;
    std::size_t pct_n = 0;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        const double d = candidate.values[i] - reference.values[i];
        sq += d * d;
        abs_sum += std::abs(d);
        if (std::abs(reference.values[i]) < 1e-12) {
            ++report.skipped_zero_denominator;
        } else {
            pct_sum += std::abs(d) / std::abs(reference.values[i]);
            ++pct_n;
        }
    }
    const double n = static_cast<double>(report.n_points);
    report.rmse = std::sqrt(sq / n);
    report.mae = abs_sum / n;
    report.mape_pct = pct_n > 0 ? 100.0 * pct_sum / static_cast<double>(pct_n) : 0.0;
    return report;
}

namespace {

constexpr std::array<int, 12> kMonthDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

std::uint8_t month_of_yearday(int day_of_year) {
    int d = day_of_year % 365;
    for (int m = 0; m < 12; ++m) {
        if (d < kMonthDays[m]) return static_cast<std::uint8_t>(m + 1);
        d -= kMonthDays[m];
    }
    return 12;
}

} // namespace

CalendarMap synthetic_year_calendar(std::size_t n_hours) {
    CalendarMap map;
    map.month.resize(n_hours);
    for (std::size_t k = 0; k < n_hours; ++k) {
        map.month[k] = month_of_yearday(static_cast<int>(k / 24));
    }
    return map;
}

CalendarMap calendar_from_epoch(std::int64_t start_epoch_s, double h_hours, std::size_t n) {
    CalendarMap map;
    map.month.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::time_t t =
            static_cast<std::time_t>(start_epoch_s + std::llround(k * h_hours * 3600.0));
        std::tm tm{};
        gmtime_r(&t, &tm);
        map.month[k] = static_cast<std::uint8_t>(tm.tm_mon + 1);
    }
    return map;
}

std::array<double, 12> monthly_averages(const SampledSeries& series, const CalendarMap& calendar) {
    if (calendar.month.size() != series.size()) {
        throw ShapeError("calendar covers " + std::to_string(calendar.month.size()) +
                         " nodes but the series has " + std::to_string(series.size()));
    }
    std::array<double, 12> sums{};
    std::array<std::size_t, 12> counts{};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const int m = calendar.month[i];
        if (m < 1 || m > 12) throw ConfigError("calendar month out of range at node " +
                                               std::to_string(i));
        sums[m - 1] += series.values[i];
        counts[m - 1] += 1;
    }
    std::array<double, 12> means{};
    for (int m = 0; m < 12; ++m) {
        if (counts[m] == 0) {
            throw ConfigError("month " + std::to_string(m + 1) + " has no samples");
        }
        means[m] = sums[m] / static_cast<double>(counts[m]);
    }
    return means;
}

} // namespace vsim
