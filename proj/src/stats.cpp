#include "mhop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhop {

double empirical_cdf(std::span<const double> sorted, double x) {
    if (sorted.empty()) throw std::invalid_argument("empirical_cdf: no samples");
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / sorted.size();
}

double fraction_below(std::span<const double> sorted, double x) {
    if (sorted.empty()) throw std::invalid_argument("fraction_below: no samples");
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / sorted.size();
}

double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty())
        throw std::invalid_argument("empirical_quantile: no samples");
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("empirical_quantile: p must be in (0, 1]");
    const auto n = static_cast<double>(sorted.size());
    auto idx = static_cast<std::ptrdiff_t>(std::ceil(p * n)) - 1;
    idx = std::clamp<std::ptrdiff_t>(idx, 0, sorted.size() - 1);
    return sorted[idx];
}

SummaryStats summarize(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: no samples");
    SummaryStats out;
    double sum = 0.0;
    for (double x : samples) sum += x;
    out.mean = sum / samples.size();
    double sq = 0.0;
    for (double x : samples) sq += (x - out.mean) * (x - out.mean);
    out.variance = samples.size() > 1 ? sq / (samples.size() - 1) : 0.0;

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    out.q01 = empirical_quantile(sorted, 0.01);
    out.q10 = empirical_quantile(sorted, 0.10);
    out.q50 = empirical_quantile(sorted, 0.50);
    return out;
}

double ks_distance(std::span<const double> sorted,
                   const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw std::invalid_argument("ks_distance: no samples");
    const auto n = static_cast<double>(sorted.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double ref = cdf(sorted[i]);
        dist = std::max(dist, std::abs((i + 1) / n - ref));
        dist = std::max(dist, std::abs(ref - i / n));
    }
    return dist;
}

WeibullFit weibull_fit_mle(std::span<const double> samples) {
    WeibullFit fit;
    if (samples.size() < 2) return fit;

    double max = 0.0;
    for (double x : samples) {
        if (!(x > 0.0)) return fit;
        max = std::max(max, x);
    }

    // Work with x/max so that powers stay bounded; the scaling cancels in
    // the profile score and multiplies back into the fitted scale.
    std::vector<double> scaled;
    scaled.reserve(samples.size());
    double mean_log = 0.0;
    for (double x : samples) {
        scaled.push_back(x / max);
        mean_log += std::log(x / max);
    }
    mean_log /= scaled.size();

    const auto score = [&](double shape) {
        double pow_sum = 0.0, pow_log_sum = 0.0;
        for (double t : scaled) {
            const double p = std::pow(t, shape);
            pow_sum += p;
            pow_log_sum += p * std::log(t);
        }
        return pow_log_sum / pow_sum - 1.0 / shape - mean_log;
    };

    double lo = 1e-3, hi = 1.0;
    int iters = 0;
    while (score(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++iters > 60 || hi > 1e6) return fit;
    }
    if (score(lo) > 0.0) return fit;

    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (score(mid) < 0.0 ? lo : hi) = mid;
        ++iters;
    }

    fit.shape = 0.5 * (lo + hi);
    double pow_sum = 0.0;
    for (double t : scaled) pow_sum += std::pow(t, fit.shape);
    fit.scale = max * std::pow(pow_sum / scaled.size(), 1.0 / fit.shape);
    fit.converged = true;
    fit.iterations = iters;
    return fit;
}

WilsonInterval wilson_interval(double successes, double n, double z) {
    if (!(n > 0.0)) throw std::invalid_argument("wilson_interval: n must be positive");
    WilsonInterval out;
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    out.estimate = p;
    out.se = half;
    out.lo = std::max(0.0, center - half);
    out.hi = std::min(1.0, center + half);
    return out;
}

}  // namespace mhop
