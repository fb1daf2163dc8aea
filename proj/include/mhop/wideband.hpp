#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mhop/channel.hpp"
#include "mhop/linkmath.hpp"
#include "mhop/topology.hpp"

namespace mhop {

// Value plus a degeneracy flag; flagged results carry +inf (a zero channel
// power would need unbounded energy per bit).
struct WidebandValue {
    double value = 0.0;
    bool flagged = false;
};

// Minimum energy per information bit over noise density for the fixed-rate
// strategy, for one frozen realization.
//
// Slope of the end-to-end rate at snr = 0: each tone contributes
// N^{p-1} K |H|^2 / D^p, averaging over W tones gives N^{p-1} K beta_n / D^p
// for hop n, and the equal time-share factor 1/K cancels the K, so
// Idot(0) = N^{p-1} min_n beta_n / D^p and
// (Eb/N0)_min = ln2 D^p / (N^{p-1} min_n beta_n).
WidebandValue ebn0_min_fixed_closed(const NetworkConfig& cfg,
                                    std::span<const double> hop_powers);

// Rate-adaptive counterpart.  With optimal time sharing the low-snr slope is
// (N^{p-1} K / D^p) / sum_k (1/beta_bottleneck_k), so
// (Eb/N0)_min = (D^p / (N^{p-1} K)) sum_k ln2 / beta_bottleneck_k.
// Equal bottlenecks collapse this to the fixed-rate value.
WidebandValue ebn0_min_adaptive_closed(
    const NetworkConfig& cfg, std::span<const double> bottleneck_powers);

struct Probe {
    double snr = 1e-8;
    double step = 0.5e-8;  // central difference half-width
};

// ln2 / Idot(0) with the derivative estimated by a central difference at the
// probe point.  The O(probe) bias is far below the 1e-3 comparisons the
// tests make against the closed forms.  Throws std::runtime_error carrying
// the probe values when the estimate is non-finite or non-positive.
double ebn0_min_numeric(const std::function<double(double)>& i_of_snr,
                        Probe probe = {});

// Wideband slope 2 Idot^2 / (-Iddot) from central differences at the probe.
// Direct differentiation of the fixed-rate expression gives
//   S0 = (2/(K W)) (sum_w c_w)^2 / sum_w (c_w^2 + 2 c_w t_w)
// with c_w the per-tone sinr slope of the bottleneck hop and t_w the
// interference-ratio slope; this collapses to 2/K only for single-tone
// channels with no simultaneous transmissions, so the closed and numeric
// values are reported side by side rather than reconciled.
double s0_numeric(const std::function<double(double)>& i_of_snr,
                  Probe probe = {});

constexpr double wideband_slope_closed(int reuse_sep) {
    return 2.0 / reuse_sep;
}

// Fitted limiting law of normalized minima.  Families cover the three
// extreme-value types for minima; the fitter in this project only produces
// weibull_type (bounded below), F(x) = 1 - exp(-((x - location)/scale)^shape).
struct EvtFit {
    enum class Family { gumbel_type, frechet_type, weibull_type };
    Family family = Family::weibull_type;
    double shape = 0.0;
    double scale = 0.0;     // a_N
    double location = 0.0;  // b_N, fixed at 0 for nonnegative channel powers
    double ks_distance = 0.0;
    bool converged = false;
};

// Quantile of the fitted law at probability p.
double evt_quantile(const EvtFit& fit, double p);

// Fixed-rate minimum energy per bit that is achievable in all but a
// fraction p_out of channel draws: the random min_n beta_n in the closed
// form is replaced by its p_out-quantile.
WidebandValue ebn0_min_outage(const NetworkConfig& cfg, double beta_quantile);
WidebandValue ebn0_min_outage(const NetworkConfig& cfg, const EvtFit& fit,
                              double p_out);
WidebandValue ebn0_min_outage(const NetworkConfig& cfg,
                              std::span<const double> sorted_beta_samples,
                              double p_out);

struct WidebandMetrics {
    double ebn0_closed = 0.0;
    double ebn0_numeric = 0.0;
    double slope_closed = 0.0;
    double slope_numeric = 0.0;
    bool flagged = false;
    // Set when the weakest hop ranked by average power differs from the
    // weakest ranked by mutual information at the probe snr; the numeric
    // limit then sits on a different branch than the closed form.
    bool probe_argmin_mismatch = false;
};

WidebandMetrics wideband_metrics(const NetworkConfig& cfg,
                                 const ReusePlan& plan, const ToneGrid& tones,
                                 Strategy strategy, Probe probe = {});

}  // namespace mhop
