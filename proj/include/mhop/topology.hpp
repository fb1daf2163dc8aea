#pragma once

#include <complex>
#include <vector>

namespace mhop {

// Per-tap fading law before delay-profile scaling.  Zero mean gives
// Rayleigh taps, nonzero mean gives Ricean taps.
struct FadingSpec {
    std::complex<double> tap_mean{0.7071067811865476, 0.0};
    double tap_variance = 0.5;
};

/**
 * Static description of one linear multihop scenario: N+1 terminals on a
 * line of length D, terminal j at (j-1)*D/N, decode-and-forward over N
 * hops of length D/N each.  Transmissions are scheduled in K phases;
 * phase k activates every K-th terminal starting at T_k, so M = N/K
 * transmissions run simultaneously and interfere.
 */
struct NetworkConfig {
    int n_hops = 1;             // N
    int reuse_sep = 1;          // K; K = n_hops means no spatial reuse
    double distance = 1.0;      // D, source-destination separation
    double pathloss_exp = 4.0;  // p
    int n_tones = 1;            // W parallel tones
    int n_taps = 1;             // V delay taps, V <= W
    std::vector<double> pdp{1.0};  // delay profile weights, sum to 1
    FadingSpec fading{};
    double snr = 1.0;  // total transmit power over total noise power, linear

    int slots() const { return n_hops / reuse_sep; }  // M

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct Interferer {
    int terminal;     // transmitter index l (it sends hop l)
    double distance;  // separation from the disturbed receiver
};

// Phase schedule plus, per hop, the co-scheduled transmitters that leak
// into its receiver.
struct ReusePlan {
    int n_hops = 0;
    int reuse_sep = 0;
    int slots = 0;
    double hop_distance = 0.0;  // D/N
    std::vector<std::vector<int>> phases;              // [k-1] -> hops, ascending
    std::vector<std::vector<Interferer>> interferers;  // [n-1] -> ascending by terminal
};

// Builds the phase schedule and interferer sets.  Rejects K that does not
// divide N and K = 1 with N > 1 (a half-duplex relay cannot transmit while
// receiving, so adjacent hops must sit in different phases).
ReusePlan build_reuse_plan(const NetworkConfig& cfg);

struct PhaseSlot {
    int phase;  // k in 1..K
    int slot;   // m in 1..M
};

// Inverse of hop = (m-1)*K + k.  Throws std::out_of_range for bad n.
PhaseSlot phase_of_hop(const ReusePlan& plan, int hop);

}  // namespace mhop
