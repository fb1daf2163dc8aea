#include "mhop/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mhop {

double fading_power(const FadingSpec& fading) {
    return std::norm(fading.tap_mean) + fading.tap_variance;
}

std::vector<TapScale> tap_scales(const FadingSpec& fading,
                                 const std::vector<double>& pdp) {
    const double norm = 1.0 / fading_power(fading);
    std::vector<TapScale> scales;
    scales.reserve(pdp.size());
    for (double weight : pdp) {
        const double power_scale = weight * norm;
        scales.push_back({fading.tap_mean * std::sqrt(power_scale),
                          std::sqrt(fading.tap_variance * power_scale)});
    }
    return scales;
}

ChannelRealization draw_realization(const NetworkConfig& cfg,
                                    const ReusePlan& plan, TrialRng& rng) {
    const auto scales = tap_scales(cfg.fading, cfg.pdp);
    const int n = cfg.n_hops;
    const int v = cfg.n_taps;

    ChannelRealization real;
    real.n_hops = n;
    real.n_taps = v;

    // Signal taps first, interference taps second: the signal channel of a
    // given (seed, trial) is then independent of the reuse separation, which
    // keeps cross-K comparisons paired.
    real.signal_taps.resize(static_cast<std::size_t>(n) * v);
    for (int hop = 0; hop < n; ++hop)
        for (int tap = 0; tap < v; ++tap)
            real.signal_taps[static_cast<std::size_t>(hop) * v + tap] =
                scales[tap].mean + scales[tap].stddev * rng.complex_normal();

    real.interference_taps.resize(n);
    for (int hop = 0; hop < n; ++hop) {
        auto& taps = real.interference_taps[hop];
        taps.resize(plan.interferers[hop].size() * v);
        for (std::size_t li = 0; li < plan.interferers[hop].size(); ++li)
            for (int tap = 0; tap < v; ++tap)
                taps[li * v + tap] =
                    scales[tap].mean + scales[tap].stddev * rng.complex_normal();
    }
    return real;
}

namespace {

void dft_row(const std::complex<double>* taps, int n_taps, int n_tones,
             std::complex<double>* tones) {
    for (int w = 1; w <= n_tones; ++w) {
        std::complex<double> acc{0.0, 0.0};
        for (int v = 0; v < n_taps; ++v) {
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>(v) * w / n_tones;
            acc += taps[v] * std::polar(1.0, angle);
        }
        tones[w - 1] = acc;
    }
}

}  // namespace

ToneGrid tones_from_taps(const ChannelRealization& real, int n_tones) {
    if (n_tones < real.n_taps)
        throw std::invalid_argument(
            "n_tones: must be at least the number of taps");

    ToneGrid grid;
    grid.n_hops = real.n_hops;
    grid.n_tones = n_tones;
    grid.signal_tones.resize(static_cast<std::size_t>(real.n_hops) * n_tones);
    grid.interference_tones.resize(real.n_hops);
    grid.hop_power.resize(real.n_hops);

    for (int hop = 0; hop < real.n_hops; ++hop) {
        auto* tones = grid.signal_tones.data() +
                      static_cast<std::size_t>(hop) * n_tones;
        dft_row(real.signal_taps.data() +
                    static_cast<std::size_t>(hop) * real.n_taps,
                real.n_taps, n_tones, tones);

        double power = 0.0;
        for (int w = 0; w < n_tones; ++w) power += std::norm(tones[w]);
        grid.hop_power[hop] = power / n_tones;

        const auto& itaps = real.interference_taps[hop];
        const std::size_t sources = itaps.size() / real.n_taps;
        grid.interference_tones[hop].resize(sources * n_tones);
        for (std::size_t li = 0; li < sources; ++li)
            dft_row(itaps.data() + li * real.n_taps, real.n_taps, n_tones,
                    grid.interference_tones[hop].data() + li * n_tones);
    }
    return grid;
}

std::vector<double> hop_powers_from_taps(const ChannelRealization& real) {
    std::vector<double> powers(real.n_hops, 0.0);
    for (int hop = 0; hop < real.n_hops; ++hop) {
        double acc = 0.0;
        for (int tap = 0; tap < real.n_taps; ++tap)
            acc += std::norm(
                real.signal_taps[static_cast<std::size_t>(hop) * real.n_taps +
                                 tap]);
        powers[hop] = acc;
    }
    return powers;
}

}  // namespace mhop
