#include "mhop/linkmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mhop {

std::vector<double> interference_load(const NetworkConfig& cfg,
                                      const ReusePlan& plan,
                                      const ToneGrid& tones, double snr) {
    const int n = cfg.n_hops;
    const int w = tones.n_tones;
    std::vector<double> inr(static_cast<std::size_t>(n) * w, 0.0);
    const double power_share = snr * cfg.reuse_sep / cfg.n_hops;  // snr/M

    for (int hop = 0; hop < n; ++hop) {
        const auto& sources = plan.interferers[hop];
        const auto& itones = tones.interference_tones[hop];
        for (std::size_t li = 0; li < sources.size(); ++li) {
            const double gain =
                power_share * std::pow(sources[li].distance, -cfg.pathloss_exp);
            for (int tone = 0; tone < w; ++tone)
                inr[static_cast<std::size_t>(hop) * w + tone] +=
                    gain * std::norm(itones[li * w + tone]);
        }
    }
    return inr;
}

std::vector<double> sinr_grid(const NetworkConfig& cfg, const ReusePlan& plan,
                              const ToneGrid& tones, double snr,
                              std::span<const double> inr) {
    (void)plan;
    const int n = cfg.n_hops;
    const int w = tones.n_tones;
    if (inr.size() != static_cast<std::size_t>(n) * w)
        throw std::invalid_argument("sinr_grid: inr size mismatch");

    // Received signal power per tone over noise power per tone: the hop
    // length D/N shortens the path by N^p while the power split over M
    // transmitters and W tones cancels against the per-tone noise share,
    // leaving the slope N^{p-1} K / D^p on |H|^2 snr.
    const double slope = std::pow(static_cast<double>(cfg.n_hops),
                                  cfg.pathloss_exp - 1.0) *
                         cfg.reuse_sep / std::pow(cfg.distance, cfg.pathloss_exp);

    std::vector<double> sinr(static_cast<std::size_t>(n) * w, 0.0);
    for (std::size_t i = 0; i < sinr.size(); ++i)
        sinr[i] = slope * std::norm(tones.signal_tones[i]) * snr / (1.0 + inr[i]);
    return sinr;
}

double hop_mutual_info(std::span<const double> sinr_row) {
    if (sinr_row.empty())
        throw std::invalid_argument("hop_mutual_info: empty sinr row");
    double acc = 0.0;
    for (double s : sinr_row) acc += std::log1p(s);
    return acc / sinr_row.size();
}

double e2e_fixed_rate(std::span<const double> hop_mi, int reuse_sep) {
    if (hop_mi.empty())
        throw std::invalid_argument("e2e_fixed_rate: no hops");
    return *std::min_element(hop_mi.begin(), hop_mi.end()) / reuse_sep;
}

std::vector<double> phase_bottlenecks(std::span<const double> hop_mi,
                                      int reuse_sep) {
    if (hop_mi.size() % reuse_sep != 0)
        throw std::invalid_argument("phase_bottlenecks: reuse_sep must divide hop count");
    const std::size_t slots = hop_mi.size() / reuse_sep;
    std::vector<double> bottleneck(reuse_sep,
                                   std::numeric_limits<double>::infinity());
    for (std::size_t m = 0; m < slots; ++m)
        for (std::size_t k = 0; k < static_cast<std::size_t>(reuse_sep); ++k)
            bottleneck[k] = std::min(bottleneck[k], hop_mi[m * reuse_sep + k]);
    return bottleneck;
}

TimeSharing e2e_rate_adaptive(std::span<const double> bottlenecks) {
    if (bottlenecks.empty())
        throw std::invalid_argument("e2e_rate_adaptive: no phases");
    const std::size_t k = bottlenecks.size();

    TimeSharing out;
    for (double b : bottlenecks) {
        if (!(b > 0.0)) {
            out.weights.assign(k, 1.0 / k);
            out.zero_bottleneck = true;
            return out;
        }
    }
    if (k == 1) {
        // Single phase: the whole frame belongs to it.  Returning the
        // bottleneck directly keeps the value bit-equal to the fixed-rate
        // path instead of round-tripping through two reciprocals.
        out.value = bottlenecks[0];
        out.weights = {1.0};
        return out;
    }

    double inv_sum = 0.0;
    out.weights.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.weights[i] = 1.0 / bottlenecks[i];
        inv_sum += out.weights[i];
    }
    out.value = 1.0 / inv_sum;
    for (auto& weight : out.weights) weight /= inv_sum;
    return out;
}

namespace {

double maxmin_k2(std::span<const double> b, double step) {
    double best = 0.0;
    const auto points = static_cast<long>(std::ceil(1.0 / step)) + 1;
    for (long i = 0; i <= points; ++i) {
        const double l1 = std::min(1.0, i * step);
        best = std::max(best, std::min(l1 * b[0], (1.0 - l1) * b[1]));
    }
    return best;
}

double maxmin_k3_scan(std::span<const double> b, double lo1, double hi1,
                      double lo2, double hi2, double step, double* arg1,
                      double* arg2) {
    double best = -1.0;
    for (double l1 = std::max(0.0, lo1); l1 <= std::min(1.0, hi1) + 0.5 * step;
         l1 += step) {
        for (double l2 = std::max(0.0, lo2);
             l2 <= std::min(1.0 - l1, hi2) + 0.5 * step; l2 += step) {
            const double l3 = 1.0 - l1 - l2;
            if (l3 < -1e-15) break;
            const double value =
                std::min({l1 * b[0], l2 * b[1], std::max(l3, 0.0) * b[2]});
            if (value > best) {
                best = value;
                if (arg1) *arg1 = l1;
                if (arg2) *arg2 = l2;
            }
        }
    }
    return best;
}

}  // namespace

double e2e_maxmin_oracle(std::span<const double> bottlenecks, double grid_step) {
    if (bottlenecks.empty() || bottlenecks.size() > 3)
        throw std::invalid_argument(
            "e2e_maxmin_oracle: supports 1 to 3 phases only");
    if (!(grid_step > 0.0 && grid_step < 1.0))
        throw std::invalid_argument("e2e_maxmin_oracle: bad grid step");
    for (double b : bottlenecks)
        if (!(b >= 0.0))
            throw std::invalid_argument("e2e_maxmin_oracle: negative bottleneck");

    if (bottlenecks.size() == 1) return bottlenecks[0];

    const double fine = 0.5 * grid_step;
    if (bottlenecks.size() == 2) return maxmin_k2(bottlenecks, fine);

    // Coarse scan of the whole simplex, then a fine scan of a box around the
    // coarse optimum.  The objective is concave and piecewise linear, so the
    // optimizer lies within coarse_drop * sum_j (1/b_j) of the coarse argmax
    // in every coordinate; the box uses that radius plus slack.
    const double coarse = 1e-3;
    double a1 = 0.0, a2 = 0.0;
    maxmin_k3_scan(bottlenecks, 0.0, 1.0, 0.0, 1.0, coarse, &a1, &a2);

    double inv_sum = 0.0;
    double b_max = 0.0;
    for (double b : bottlenecks) {
        if (b > 0.0) inv_sum += 1.0 / b;
        b_max = std::max(b_max, b);
    }
    if (b_max == 0.0) return 0.0;
    const double radius = 1.5 * coarse * b_max * inv_sum + 4.0 * coarse;

    if (radius > 0.45)  // ill-conditioned tuple; fall back to one dense scan
        return maxmin_k3_scan(bottlenecks, 0.0, 1.0, 0.0, 1.0, fine, nullptr,
                              nullptr);
    return maxmin_k3_scan(bottlenecks, a1 - radius, a1 + radius, a2 - radius,
                          a2 + radius, fine, nullptr, nullptr);
}

LinkRates compute_link_rates(const NetworkConfig& cfg, const ReusePlan& plan,
                             const ToneGrid& tones, double snr) {
    LinkRates rates;
    rates.n_hops = cfg.n_hops;
    rates.n_tones = tones.n_tones;
    rates.reuse_sep = cfg.reuse_sep;

    rates.inr = interference_load(cfg, plan, tones, snr);
    rates.sinr = sinr_grid(cfg, plan, tones, snr, rates.inr);

    rates.hop_mi.resize(cfg.n_hops);
    for (int hop = 0; hop < cfg.n_hops; ++hop)
        rates.hop_mi[hop] = hop_mutual_info(
            std::span<const double>(rates.sinr)
                .subspan(static_cast<std::size_t>(hop) * tones.n_tones,
                         tones.n_tones));

    rates.e2e_fixed = e2e_fixed_rate(rates.hop_mi, cfg.reuse_sep);
    auto sharing =
        e2e_rate_adaptive(phase_bottlenecks(rates.hop_mi, cfg.reuse_sep));
    rates.e2e_adaptive = sharing.value;
    rates.time_share = std::move(sharing.weights);
    rates.zero_bottleneck = sharing.zero_bottleneck;
    return rates;
}

double e2e_mutual_information(const NetworkConfig& cfg, const ReusePlan& plan,
                              const ToneGrid& tones, double snr,
                              Strategy strategy) {
    const auto inr = interference_load(cfg, plan, tones, snr);
    const auto sinr = sinr_grid(cfg, plan, tones, snr, inr);
    std::vector<double> hop_mi(cfg.n_hops);
    for (int hop = 0; hop < cfg.n_hops; ++hop)
        hop_mi[hop] = hop_mutual_info(
            std::span<const double>(sinr).subspan(
                static_cast<std::size_t>(hop) * tones.n_tones, tones.n_tones));

    if (strategy == Strategy::fixed_rate)
        return e2e_fixed_rate(hop_mi, cfg.reuse_sep);
    return e2e_rate_adaptive(phase_bottlenecks(hop_mi, cfg.reuse_sep)).value;
}

}  // namespace mhop
