#include "mhop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace mhop {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Per-hop power CDF behaves like x^V near zero (V independent complex
// Gaussian taps), and taking the minimum over M hops preserves that
// exponent, so E[1/power] is finite exactly when V >= 2.
bool inverse_power_integrable(int n_taps) { return n_taps >= 2; }

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
    double se_of_mean() const { return n > 0 ? stddev() / std::sqrt(n) : 0.0; }
};

EvtFit fit_minima(std::span<const double> sorted_minima) {
    EvtFit fit;
    fit.family = EvtFit::Family::weibull_type;
    fit.location = 0.0;
    const WeibullFit w = weibull_fit_mle(sorted_minima);
    fit.converged = w.converged;
    if (!w.converged) return fit;
    fit.shape = w.shape;
    fit.scale = w.scale;
    fit.ks_distance = ks_distance(sorted_minima, [&](double x) {
        return x <= 0.0 ? 0.0
                        : 1.0 - std::exp(-std::pow(x / w.scale, w.shape));
    });
    return fit;
}

void parallel_trials(std::uint64_t trials, unsigned workers,
                     const std::function<void(std::uint64_t)>& body) {
    if (workers <= 1 || trials < 2) {
        for (std::uint64_t t = 0; t < trials; ++t) body(t);
        return;
    }
    const unsigned used = std::min<std::uint64_t>(workers, trials);
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        const std::uint64_t begin = trials * w / used;
        const std::uint64_t end = trials * (w + 1) / used;
        pool.emplace_back([begin, end, &body] {
            for (std::uint64_t t = begin; t < end; ++t) body(t);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> auto_grid(const std::vector<double>& pooled_sorted) {
    constexpr std::size_t kPoints = 513;
    std::vector<double> grid;
    if (pooled_sorted.empty()) return grid;
    grid.reserve(kPoints);
    const std::size_t last = pooled_sorted.size() - 1;
    for (std::size_t i = 0; i < kPoints; ++i)
        grid.push_back(pooled_sorted[last * i / (kPoints - 1)]);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

}  // namespace

void McConfig::validate() const {
    if (trials < 1)
        throw std::invalid_argument("trials: must be a positive integer");
    if (!(target_rate >= 0.0))
        throw std::invalid_argument("target_rate: must be nonnegative");
    for (std::size_t i = 1; i < cdf_grid.size(); ++i)
        if (!(cdf_grid[i] > cdf_grid[i - 1]))
            throw std::invalid_argument("cdf_grid: must be strictly increasing");
}

McSummary run_ensemble(const NetworkConfig& cfg, const McConfig& mc,
                       const RunOptions& options) {
    mc.validate();
    const ReusePlan plan = build_reuse_plan(cfg);
    const int phases = cfg.reuse_sep;
    const std::uint64_t trials = mc.trials;

    const RealizationSource source =
        options.source ? options.source
                       : RealizationSource([](const NetworkConfig& net,
                                              const ReusePlan& reuse,
                                              std::uint64_t seed,
                                              std::uint64_t trial) {
                             TrialRng rng(seed, trial);
                             return draw_realization(net, reuse, rng);
                         });

    std::vector<double> i_fixed(trials), i_adaptive(trials);
    std::vector<double> ebn0_fixed(trials), ebn0_adaptive(trials);
    std::vector<double> beta_min(trials);
    std::vector<double> inv_bottleneck(trials * phases);
    std::vector<unsigned char> flagged(trials, 0);

    parallel_trials(trials, options.workers, [&](std::uint64_t t) {
        const ChannelRealization real = source(cfg, plan, mc.seed, t);
        const ToneGrid tones = tones_from_taps(real, cfg.n_tones);
        const LinkRates rates = compute_link_rates(cfg, plan, tones, cfg.snr);

        i_fixed[t] = rates.e2e_fixed;
        i_adaptive[t] = rates.e2e_adaptive;

        const auto bottleneck_power =
            phase_bottlenecks(tones.hop_power, phases);
        const auto ef = ebn0_min_fixed_closed(cfg, tones.hop_power);
        const auto ea = ebn0_min_adaptive_closed(cfg, bottleneck_power);
        ebn0_fixed[t] = ef.value;
        ebn0_adaptive[t] = ea.value;
        beta_min[t] = *std::min_element(tones.hop_power.begin(),
                                        tones.hop_power.end());
        for (int k = 0; k < phases; ++k)
            inv_bottleneck[t * phases + k] =
                bottleneck_power[k] > 0.0
                    ? 1.0 / bottleneck_power[k]
                    : std::numeric_limits<double>::infinity();

        if (rates.zero_bottleneck || ef.flagged || ea.flagged ||
            !std::isfinite(rates.e2e_fixed) || !std::isfinite(rates.e2e_adaptive))
            flagged[t] = 1;
    });

    McSummary out;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (flagged[t]) ++out.flagged_trials;
        if (i_fixed[t] > i_adaptive[t]) ++out.dominance_violations;
    }

    auto fill_strategy = [&](StrategySummary& s, std::vector<double>& mi,
                             const std::vector<double>& ebn0) {
        s.mi = summarize(mi);
        s.ebn0_min = summarize(ebn0);
        std::vector<double> sorted = mi;
        std::sort(sorted.begin(), sorted.end());
        s.p_out = fraction_below(sorted, mc.target_rate);
        s.p_out_interval =
            wilson_interval(s.p_out * static_cast<double>(trials),
                            static_cast<double>(trials));
        if (options.keep_samples) s.samples = sorted;

        if (out.grid.empty()) {
            std::vector<double> pooled = i_fixed;
            pooled.insert(pooled.end(), i_adaptive.begin(), i_adaptive.end());
            std::sort(pooled.begin(), pooled.end());
            out.grid = mc.cdf_grid.empty() ? auto_grid(pooled) : mc.cdf_grid;
        }
        s.cdf.reserve(out.grid.size());
        for (double g : out.grid) s.cdf.push_back(empirical_cdf(sorted, g));
    };
    fill_strategy(out.fixed, i_fixed, ebn0_fixed);
    fill_strategy(out.adaptive, i_adaptive, ebn0_adaptive);

    Welford chi;
    for (double x : inv_bottleneck) chi.add(x);
    out.chi.value = chi.mean;
    out.chi.standard_error = chi.se_of_mean();
    out.chi.samples = chi.n;
    out.chi.heavy_tail_warning = !inverse_power_integrable(cfg.n_taps);

    std::sort(beta_min.begin(), beta_min.end());
    out.evt = fit_minima(beta_min);

    out.metadata.net = cfg;
    out.metadata.mc = mc;
    out.metadata.fading_power_scale = 1.0 / fading_power(cfg.fading);
    return out;
}

OutageEstimate outage_probability(std::span<const double> rate_samples,
                                  double rate) {
    std::vector<double> sorted(rate_samples.begin(), rate_samples.end());
    std::sort(sorted.begin(), sorted.end());
    OutageEstimate out;
    out.probability = fraction_below(sorted, rate);
    out.interval =
        wilson_interval(out.probability * static_cast<double>(sorted.size()),
                        static_cast<double>(sorted.size()));
    return out;
}

PowerSampler hop_power_sampler(const FadingSpec& fading,
                               const std::vector<double>& pdp) {
    const auto scales = tap_scales(fading, pdp);
    return [scales](TrialRng& rng) {
        double power = 0.0;
        for (const auto& s : scales)
            power += std::norm(s.mean + s.stddev * rng.complex_normal());
        return power;
    };
}

PowerSampler constant_power_sampler(double power) {
    return [power](TrialRng&) { return power; };
}

ChiEstimate estimate_chi(const PowerSampler& sampler, int slots,
                         std::uint64_t trials, std::uint64_t seed,
                         int n_taps) {
    if (slots < 1) throw std::invalid_argument("estimate_chi: slots must be >= 1");
    if (trials < 2) throw std::invalid_argument("estimate_chi: need >= 2 trials");
    Welford acc;
    for (std::uint64_t t = 0; t < trials; ++t) {
        TrialRng rng(seed, t);
        double worst = std::numeric_limits<double>::infinity();
        for (int m = 0; m < slots; ++m) worst = std::min(worst, sampler(rng));
        acc.add(worst > 0.0 ? 1.0 / worst
                            : std::numeric_limits<double>::infinity());
    }
    ChiEstimate out;
    out.value = acc.mean;
    out.standard_error = acc.se_of_mean();
    out.samples = acc.n;
    out.heavy_tail_warning = n_taps != 0 && !inverse_power_integrable(n_taps);
    return out;
}

ChiEstimate estimate_chi(const NetworkConfig& cfg, std::uint64_t trials,
                         std::uint64_t seed) {
    return estimate_chi(hop_power_sampler(cfg.fading, cfg.pdp), cfg.slots(),
                        trials, seed, cfg.n_taps);
}

EvtReport evt_diagnostics(const PowerSampler& sampler,
                          std::span<const int> n_values,
                          std::uint64_t samples_per_n, std::uint64_t seed,
                          bool keep_samples) {
    if (samples_per_n < 2)
        throw std::invalid_argument("evt_diagnostics: need >= 2 samples per N");
    EvtReport report;
    report.entries.reserve(n_values.size());
    for (std::size_t j = 0; j < n_values.size(); ++j) {
        const int n = n_values[j];
        if (n < 1)
            throw std::invalid_argument("evt_diagnostics: N values must be >= 1");
        std::vector<double> minima(samples_per_n);
        for (std::uint64_t t = 0; t < samples_per_n; ++t) {
            TrialRng rng(seed, j * samples_per_n + t);
            double worst = std::numeric_limits<double>::infinity();
            for (int hop = 0; hop < n; ++hop)
                worst = std::min(worst, sampler(rng));
            minima[t] = worst;
        }
        std::sort(minima.begin(), minima.end());
        EvtEntry entry;
        entry.n_hops = n;
        entry.fit = fit_minima(minima);
        // A failed fit keeps the raw minima so callers can fall back to
        // empirical quantiles.
        if (keep_samples || !entry.fit.converged)
            entry.samples = std::move(minima);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::vector<ChiConvergenceRow> chi_convergence_check(
    const PowerSampler& sampler, std::span<const int> n_values, int slots,
    std::uint64_t trials, std::uint64_t seed, double chi_ref, double distance,
    double pathloss_exp) {
    if (slots < 1)
        throw std::invalid_argument("chi_convergence_check: slots must be >= 1");
    if (!(chi_ref > 0.0))
        throw std::invalid_argument("chi_convergence_check: chi_ref must be positive");
    if (trials < 2)
        throw std::invalid_argument("chi_convergence_check: need >= 2 trials");

    std::vector<ChiConvergenceRow> rows;
    rows.reserve(n_values.size());
    const double norm = std::pow(distance, pathloss_exp) * kLn2 * chi_ref;

    for (std::size_t j = 0; j < n_values.size(); ++j) {
        const int n = n_values[j];
        if (n < slots || n % slots != 0)
            throw std::invalid_argument(
                "chi_convergence_check: slot count must divide every N");
        const int phases = n / slots;

        NetworkConfig family;
        family.n_hops = n;
        family.reuse_sep = phases;
        family.distance = distance;
        family.pathloss_exp = pathloss_exp;

        Welford acc;
        std::vector<double> power(n);
        for (std::uint64_t t = 0; t < trials; ++t) {
            TrialRng rng(seed, j * trials + t);
            for (int hop = 0; hop < n; ++hop) power[hop] = sampler(rng);
            const auto ebn0 = ebn0_min_adaptive_closed(
                family, phase_bottlenecks(power, phases));
            acc.add(ebn0.value * std::pow(static_cast<double>(n),
                                          pathloss_exp - 1.0) /
                    norm);
        }
        rows.push_back({n, acc.mean, acc.stddev()});
    }
    return rows;
}

}  // namespace mhop
