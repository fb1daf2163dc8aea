#include "mhop/wideband.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mhop/stats.hpp"

namespace mhop {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double range_factor(const NetworkConfig& cfg) {
    // D^p / N^{p-1}
    return std::pow(cfg.distance, cfg.pathloss_exp) /
           std::pow(static_cast<double>(cfg.n_hops), cfg.pathloss_exp - 1.0);
}

[[noreturn]] void probe_error(const char* what, double snr, double step,
                              double d1, double d2) {
    std::ostringstream msg;
    msg << what << " (probe snr " << snr << ", step " << step
        << ", first difference " << d1 << ", second difference " << d2 << ")";
    throw std::runtime_error(msg.str());
}

}  // namespace

WidebandValue ebn0_min_fixed_closed(const NetworkConfig& cfg,
                                    std::span<const double> hop_powers) {
    if (hop_powers.size() != static_cast<std::size_t>(cfg.n_hops))
        throw std::invalid_argument("ebn0_min_fixed_closed: power count mismatch");
    const double weakest =
        *std::min_element(hop_powers.begin(), hop_powers.end());
    if (!(weakest > 0.0))
        return {std::numeric_limits<double>::infinity(), true};
    return {kLn2 * range_factor(cfg) / weakest, false};
}

WidebandValue ebn0_min_adaptive_closed(
    const NetworkConfig& cfg, std::span<const double> bottleneck_powers) {
    if (bottleneck_powers.size() != static_cast<std::size_t>(cfg.reuse_sep))
        throw std::invalid_argument(
            "ebn0_min_adaptive_closed: expected one bottleneck per phase");
    double inv_sum = 0.0;
    for (double b : bottleneck_powers) {
        if (!(b > 0.0)) return {std::numeric_limits<double>::infinity(), true};
        inv_sum += 1.0 / b;
    }
    return {kLn2 * range_factor(cfg) * inv_sum / cfg.reuse_sep, false};
}

double ebn0_min_numeric(const std::function<double(double)>& i_of_snr,
                        Probe probe) {
    if (!(probe.snr > 0.0) || !(probe.step > 0.0) || probe.step >= probe.snr)
        throw std::invalid_argument("ebn0_min_numeric: bad probe");
    const double hi = i_of_snr(probe.snr + probe.step);
    const double lo = i_of_snr(probe.snr - probe.step);
    const double slope = (hi - lo) / (2.0 * probe.step);
    if (!std::isfinite(slope) || slope <= 0.0)
        probe_error("ebn0_min_numeric: non-positive or non-finite rate slope",
                    probe.snr, probe.step, slope, 0.0);
    return kLn2 / slope;
}

double s0_numeric(const std::function<double(double)>& i_of_snr, Probe probe) {
    if (!(probe.snr > 0.0) || !(probe.step > 0.0) || probe.step >= probe.snr)
        throw std::invalid_argument("s0_numeric: bad probe");
    const double hi = i_of_snr(probe.snr + probe.step);
    const double mid = i_of_snr(probe.snr);
    const double lo = i_of_snr(probe.snr - probe.step);
    const double d1 = (hi - lo) / (2.0 * probe.step);
    const double d2 = (hi - 2.0 * mid + lo) / (probe.step * probe.step);
    if (!std::isfinite(d1) || !std::isfinite(d2))
        probe_error("s0_numeric: non-finite difference", probe.snr, probe.step,
                    d1, d2);
    if (d2 >= 0.0)
        probe_error("s0_numeric: curvature estimate not negative (numerical "
                    "noise at the probe)",
                    probe.snr, probe.step, d1, d2);
    return 2.0 * d1 * d1 / (-d2);
}

double evt_quantile(const EvtFit& fit, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("evt_quantile: p must be in (0, 1)");
    const double t = -std::log1p(-p);  // -ln(1-p)
    switch (fit.family) {
        case EvtFit::Family::weibull_type:
            return fit.location + fit.scale * std::pow(t, 1.0 / fit.shape);
        case EvtFit::Family::gumbel_type:
            return fit.location + fit.scale * std::log(t);
        case EvtFit::Family::frechet_type:
            return fit.location - fit.scale * std::pow(t, -1.0 / fit.shape);
    }
    throw std::logic_error("evt_quantile: unknown family");
}

WidebandValue ebn0_min_outage(const NetworkConfig& cfg, double beta_quantile) {
    if (!(beta_quantile > 0.0))
        return {std::numeric_limits<double>::infinity(), true};
    return {kLn2 * range_factor(cfg) / beta_quantile, false};
}

WidebandValue ebn0_min_outage(const NetworkConfig& cfg, const EvtFit& fit,
                              double p_out) {
    return ebn0_min_outage(cfg, evt_quantile(fit, p_out));
}

WidebandValue ebn0_min_outage(const NetworkConfig& cfg,
                              std::span<const double> sorted_beta_samples,
                              double p_out) {
    return ebn0_min_outage(cfg,
                           empirical_quantile(sorted_beta_samples, p_out));
}

WidebandMetrics wideband_metrics(const NetworkConfig& cfg,
                                 const ReusePlan& plan, const ToneGrid& tones,
                                 Strategy strategy, Probe probe) {
    WidebandMetrics out;
    out.slope_closed = wideband_slope_closed(cfg.reuse_sep);

    const auto& powers = tones.hop_power;
    WidebandValue closed;
    if (strategy == Strategy::fixed_rate) {
        closed = ebn0_min_fixed_closed(cfg, powers);
    } else {
        closed = ebn0_min_adaptive_closed(
            cfg, phase_bottlenecks(powers, cfg.reuse_sep));
    }
    out.ebn0_closed = closed.value;
    out.flagged = closed.flagged;
    if (out.flagged) {
        out.ebn0_numeric = closed.value;
        out.slope_numeric = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    const auto i_of_snr = [&](double snr) {
        return e2e_mutual_information(cfg, plan, tones, snr, strategy);
    };
    out.ebn0_numeric = ebn0_min_numeric(i_of_snr, probe);
    out.slope_numeric = s0_numeric(i_of_snr, probe);

    // Rank hops by average power and by probed rate; a disagreement means
    // the probe sits past a bottleneck crossover.
    const auto inr = interference_load(cfg, plan, tones, probe.snr);
    const auto sinr = sinr_grid(cfg, plan, tones, probe.snr, inr);
    std::vector<double> probed_mi(cfg.n_hops);
    for (int hop = 0; hop < cfg.n_hops; ++hop)
        probed_mi[hop] = hop_mutual_info(
            std::span<const double>(sinr).subspan(
                static_cast<std::size_t>(hop) * tones.n_tones, tones.n_tones));
    const auto by_power = phase_bottlenecks(powers, cfg.reuse_sep);
    const auto by_rate = phase_bottlenecks(probed_mi, cfg.reuse_sep);
    for (int k = 0; k < cfg.reuse_sep; ++k) {
        int arg_power = -1, arg_rate = -1;
        for (int m = 0; m < cfg.slots(); ++m) {
            const int hop = m * cfg.reuse_sep + k;
            if (powers[hop] == by_power[k]) arg_power = hop;
            if (probed_mi[hop] == by_rate[k]) arg_rate = hop;
        }
        if (arg_power != arg_rate) out.probe_argmin_mismatch = true;
    }
    return out;
}

}  // namespace mhop
