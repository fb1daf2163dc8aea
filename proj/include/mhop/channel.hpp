#pragma once

#include <complex>
#include <vector>

#include "mhop/rng.hpp"
#include "mhop/topology.hpp"

namespace mhop {

// Per-tap mean and standard deviation after delay-profile scaling.
struct TapScale {
    std::complex<double> mean;
    double stddev;
};

// Total average power of one unscaled tap, |mean|^2 + variance.
double fading_power(const FadingSpec& fading);

// Scales tap v so that its average power is exactly pdp[v] regardless of the
// raw fading law; the total average channel power per hop is then 1 and flat
// and selective profiles see the same mean received power.  The applied
// factor 1/(|mean|^2 + variance) is reported in run metadata.
std::vector<TapScale> tap_scales(const FadingSpec& fading,
                                 const std::vector<double>& pdp);

// One draw of every delay tap the network needs: the N signal channels and,
// aligned with ReusePlan::interferers, the channels from each co-scheduled
// transmitter into the disturbed receiver.
struct ChannelRealization {
    int n_hops = 0;
    int n_taps = 0;
    std::vector<std::complex<double>> signal_taps;  // [(n-1)*V + v]
    std::vector<std::vector<std::complex<double>>>
        interference_taps;  // [n-1][li*V + v], li indexes plan.interferers[n-1]
};

// Draws all taps i.i.d. from the scaled fading law in a fixed canonical
// order (all signal taps hop-major, then interference taps), so a given
// TrialRng state maps to exactly one realization.
ChannelRealization draw_realization(const NetworkConfig& cfg,
                                    const ReusePlan& plan, TrialRng& rng);

// Frequency response on W tones plus per-hop average power.
struct ToneGrid {
    int n_hops = 0;
    int n_tones = 0;
    std::vector<std::complex<double>> signal_tones;  // [(n-1)*W + (w-1)]
    std::vector<std::vector<std::complex<double>>>
        interference_tones;          // [n-1][li*W + (w-1)]
    std::vector<double> hop_power;   // (1/W) sum_w |H_{n,w}|^2
};

// H_{n,w} = sum_v h_{n,v} e^{-j 2 pi v w / W} for w = 1..W.  The tap energy
// sum_v |h_v|^2 equals the tone average (1/W) sum_w |H_w|^2 exactly, which
// the tests pin to 1e-12 relative.
ToneGrid tones_from_taps(const ChannelRealization& real, int n_tones);

// Tap-domain shortcut for the per-hop average power; equals
// ToneGrid::hop_power without building tones.
std::vector<double> hop_powers_from_taps(const ChannelRealization& real);

}  // namespace mhop
