#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mhop/channel.hpp"
#include "mhop/linkmath.hpp"
#include "mhop/stats.hpp"
#include "mhop/topology.hpp"
#include "mhop/wideband.hpp"

namespace mhop {

struct McConfig {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double target_rate = 0.0;       // nats/s/Hz, outage threshold
    std::vector<double> cdf_grid;   // empty: automatic quantile grid
    void validate() const;
};

// Hook for substituting channel draws in tests; the default draws from the
// scaled fading law with the stream derived from (seed, trial).
using RealizationSource = std::function<ChannelRealization(
    const NetworkConfig&, const ReusePlan&, std::uint64_t seed,
    std::uint64_t trial)>;

struct RunOptions {
    unsigned workers = 1;
    bool keep_samples = false;
    RealizationSource source;  // empty: draw from the fading law
};

struct StrategySummary {
    SummaryStats mi;         // end-to-end rate, nats/s/Hz
    SummaryStats ebn0_min;   // per-trial closed-form minimum energy per bit
    double p_out = 0.0;      // fraction of trials strictly below target_rate
    WilsonInterval p_out_interval;
    std::vector<double> cdf;      // on McSummary::grid
    std::vector<double> samples;  // sorted; only with RunOptions::keep_samples
};

// Mean of 1 / (worst channel power among M simultaneous hops).  For flat
// fading the power density is positive at zero and the mean diverges; the
// warning flags that regime.
struct ChiEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    bool heavy_tail_warning = false;
};

struct McMetadata {
    NetworkConfig net;
    McConfig mc;
    double fading_power_scale = 1.0;  // factor applied to reach unit power
};

struct McSummary {
    std::vector<double> grid;  // shared CDF evaluation points, ascending
    StrategySummary fixed;
    StrategySummary adaptive;
    ChiEstimate chi;          // from per-phase bottleneck powers
    EvtFit evt;               // fit to the per-trial minimum hop power
    std::uint64_t flagged_trials = 0;      // zero bottleneck or non-finite
    std::uint64_t dominance_violations = 0;  // fixed > adaptive draws
    McMetadata metadata;
};

// Runs the trial ensemble.  Identical (cfg, mc) produce bit-identical
// summaries for every worker count: trials own disjoint random streams and
// aggregation always walks them in trial order.
McSummary run_ensemble(const NetworkConfig& cfg, const McConfig& mc,
                       const RunOptions& options = {});

struct OutageEstimate {
    double probability = 0.0;
    WilsonInterval interval;
};

// Fraction of rate samples strictly below the threshold.
OutageEstimate outage_probability(std::span<const double> rate_samples,
                                  double rate);

// Draws one per-hop average channel power per call.
using PowerSampler = std::function<double(TrialRng&)>;

PowerSampler hop_power_sampler(const FadingSpec& fading,
                               const std::vector<double>& pdp);
PowerSampler constant_power_sampler(double power);

ChiEstimate estimate_chi(const PowerSampler& sampler, int slots,
                         std::uint64_t trials, std::uint64_t seed,
                         int n_taps = 0);
ChiEstimate estimate_chi(const NetworkConfig& cfg, std::uint64_t trials,
                         std::uint64_t seed);

struct EvtEntry {
    int n_hops = 0;
    EvtFit fit;
    std::vector<double> samples;  // sorted minima; only when kept
};

struct EvtReport {
    std::vector<EvtEntry> entries;
};

// For each N, draws minima of N independent hop powers and fits the
// bounded-below extreme-value family with the location pinned at 0 (channel
// powers are nonnegative).  A failed fit leaves converged false and keeps
// the samples so callers can fall back to empirical quantiles.  Independent
// of any reuse structure.
EvtReport evt_diagnostics(const PowerSampler& sampler,
                          std::span<const int> n_values,
                          std::uint64_t samples_per_n, std::uint64_t seed,
                          bool keep_samples = false);

struct ChiConvergenceRow {
    int n_hops = 0;
    double mean_ratio = 0.0;
    double ratio_stddev = 0.0;
};

// Normalized per-trial ratio between the rate-adaptive minimum energy per
// bit and its large-N deterministic limit; the mean tends to 1 and the
// spread shrinks as N grows with the slot count fixed.
std::vector<ChiConvergenceRow> chi_convergence_check(
    const PowerSampler& sampler, std::span<const int> n_values, int slots,
    std::uint64_t trials, std::uint64_t seed, double chi_ref, double distance,
    double pathloss_exp);

}  // namespace mhop
