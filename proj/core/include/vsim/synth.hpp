#pragma once

#include <cstdint>

#include "vsim/series.hpp"

namespace vsim {

/// Parameters for the synthetic hourly profile generators. Generators are
/// pure functions of the parameters and the seed.
struct SynthProfileParams {
    double daily_peak_kw = 75.0;
    double seasonal_amplitude = 0.3;  // fraction of the peak
    double noise_frac = 0.0;          // multiplicative uniform noise fraction
    std::uint64_t seed = 0;
    int days = 365;
};

/// Hourly PV output: half-rectified daily sinusoid (sunrise 06:00, noon peak)
/// modulated by a seasonal sinusoid peaking midsummer. All values >= 0.
SampledSeries synth_pv_profile(const SynthProfileParams& params);

/// Hourly electric load: base consumption with a mild evening shape and a
/// seasonal term peaking in winter. All values >= 0.
SampledSeries synth_load_profile(const SynthProfileParams& params);

/// Adds seeded uniform noise in [-delta * sup|series|, +delta * sup|series|].
/// delta = 0 returns the input unchanged.
SampledSeries inject_noise(const SampledSeries& series, double delta, std::uint64_t seed);

/// Deterministic uniform generator shared by the synthetic and noise paths
/// (explicit bit mapping, identical output on every platform).
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    /// Uniform in [0, 1).
    double unit();
    /// Uniform in [-1, 1).
    double symmetric() { return 2.0 * unit() - 1.0; }

private:
    std::uint64_t state_;
};

} // namespace vsim
