#include "vsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vsim {

double UniformRng::unit() {
    // splitmix64 step; top 53 bits make the mantissa.
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMidsummerDay = 172;

void validate(const SynthProfileParams& p) {
    if (!(p.daily_peak_kw > 0.0)) throw ConfigError("daily_peak must be positive");
    if (p.seasonal_amplitude < 0.0 || p.seasonal_amplitude > 1.0 || p.noise_frac < 0.0 ||
        p.noise_frac > 1.0) {
        throw ConfigError("seasonal_amplitude and noise_frac must lie in [0, 1]");
    }
    if (p.days < 1) throw ConfigError("profile needs at least one day");
}

Grid hourly_grid(int days) { return Grid{0.0, 1.0, static_cast<std::size_t>(days) * 24}; }

} // namespace

SampledSeries synth_pv_profile(const SynthProfileParams& params) {
    validate(params);
    SampledSeries out = SampledSeries::zeros(hourly_grid(params.days));
    UniformRng rng(params.seed);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const int day = static_cast<int>(k / 24);
        const int hour = static_cast<int>(k % 24);
        const double daily = std::max(0.0, std::sin(2.0 * kPi * (hour - 6) / 24.0));
        const double season =
            1.0 - params.seasonal_amplitude *
                      (1.0 - std::cos(2.0 * kPi * (day - kMidsummerDay) / 365.0)) / 2.0;
        double v = params.daily_peak_kw * season * daily;
        if (params.noise_frac > 0.0) v *= 1.0 + params.noise_frac * rng.symmetric();
        out.values[k] = std::max(0.0, v);
    }
    return out;
}

SampledSeries synth_load_profile(const SynthProfileParams& params) {
    validate(params);
    SampledSeries out = SampledSeries::zeros(hourly_grid(params.days));
    UniformRng rng(params.seed);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const int day = static_cast<int>(k / 24);
        const int hour = static_cast<int>(k % 24);
        // Winter-peaking season term (maximum around Jan 1) and a soft
        // afternoon/evening consumption bump.
        const double winter = (1.0 + std::cos(2.0 * kPi * day / 365.0)) / 2.0;
        const double season = 1.0 - params.seasonal_amplitude * (1.0 - winter);
        const double daily = 0.8 + 0.1 * (1.0 + std::sin(2.0 * kPi * (hour - 9) / 24.0));
        double v = params.daily_peak_kw * season * daily;
        if (params.noise_frac > 0.0) v *= 1.0 + params.noise_frac * rng.symmetric();
        out.values[k] = std::max(0.0, v);
    }
    return out;
}

SampledSeries inject_noise(const SampledSeries& series, double delta, std::uint64_t seed) {
    if (delta < 0.0) throw ConfigError("noise level delta cannot be negative");
    if (delta == 0.0) return series;
    const double amplitude = delta * sup_abs(series.values);
    SampledSeries out = series;
    UniformRng rng(seed);
    for (double& v : out.values) v += amplitude * rng.symmetric();
    return out;
}

} // namespace vsim
