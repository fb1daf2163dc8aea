#pragma once

#include <span>
#include <vector>

#include "mhop/channel.hpp"
#include "mhop/topology.hpp"

namespace mhop {

enum class Strategy { fixed_rate, rate_adaptive };

// Per-tone interference-to-noise power ratio at the receiver of each hop,
// row-major [(n-1)*W + (w-1)].
//
// Each of the M simultaneous transmitters radiates P/(M*W) per tone, so on
// tone w of hop n the interference power is sum_l f_l^-p |G_{l,w}|^2 P/(M*W)
// and the thermal noise power is N0*B/W.  Dividing and substituting
// snr = P/(N0*B) and M = N/K gives
//     inr_{n,w} = (snr*K/N) * sum_l f_l^-p |G_{l,w}|^2,
// which vanishes linearly in snr, so interference drops out of every
// low-snr limit.  K = N leaves the sum empty and the ratio identically 0.
std::vector<double> interference_load(const NetworkConfig& cfg,
                                      const ReusePlan& plan,
                                      const ToneGrid& tones, double snr);

// Per-tone SINR, row-major: N^{p-1} K |H_{n,w}|^2 snr / D^p / (1 + inr).
std::vector<double> sinr_grid(const NetworkConfig& cfg, const ReusePlan& plan,
                              const ToneGrid& tones, double snr,
                              std::span<const double> inr);

// Average mutual information of one hop across its tones, nats/s/Hz:
// (1/W) sum_w ln(1 + sinr_w).
double hop_mutual_info(std::span<const double> sinr_row);

// End-to-end rate under a fixed common rate and equal time sharing: the
// bottleneck hop decides, and only 1/K of the time is useful.
double e2e_fixed_rate(std::span<const double> hop_mi, int reuse_sep);

// Worst hop of each phase, [k-1] -> min over slots m of hop (m-1)K + k.
std::vector<double> phase_bottlenecks(std::span<const double> hop_mi,
                                      int reuse_sep);

struct TimeSharing {
    double value = 0.0;
    std::vector<double> weights;  // optimal phase durations, sum to 1
    bool zero_bottleneck = false;
};

// Max-min optimal time sharing across phases.  Maximizing
// min_k lambda_k b_k over the simplex equalizes the products, giving
// value (sum_k 1/b_k)^-1 and weights lambda_k = (1/b_k) / sum_j (1/b_j).
// A zero bottleneck yields value 0 with uniform weights, flagged.
TimeSharing e2e_rate_adaptive(std::span<const double> phase_bottlenecks);

// Brute-force simplex grid maximization of min_k lambda_k b_k, used as an
// independent check of e2e_rate_adaptive.  Supports K <= 3 only; the result
// is within max(b)*grid_step/2 below the true optimum.
double e2e_maxmin_oracle(std::span<const double> phase_bottlenecks,
                         double grid_step);

struct LinkRates {
    int n_hops = 0;
    int n_tones = 0;
    int reuse_sep = 0;
    std::vector<double> inr;         // [(n-1)*W + (w-1)]
    std::vector<double> sinr;        // [(n-1)*W + (w-1)]
    std::vector<double> hop_mi;      // [n-1], nats/s/Hz
    std::vector<double> time_share;  // [k-1]
    double e2e_fixed = 0.0;          // nats/s/Hz
    double e2e_adaptive = 0.0;       // nats/s/Hz
    bool zero_bottleneck = false;

    double hop_mi_at(int phase, int slot) const {
        return hop_mi[static_cast<std::size_t>(slot - 1) * reuse_sep + phase - 1];
    }
};

LinkRates compute_link_rates(const NetworkConfig& cfg, const ReusePlan& plan,
                             const ToneGrid& tones, double snr);

// End-to-end conditional mutual information at the given snr for one frozen
// realization; interference ratios are recomputed for each snr.
double e2e_mutual_information(const NetworkConfig& cfg, const ReusePlan& plan,
                              const ToneGrid& tones, double snr,
                              Strategy strategy);

}  // namespace mhop
