#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mhop {

// Fraction of samples <= x (right-continuous empirical CDF).
double empirical_cdf(std::span<const double> sorted, double x);

// Fraction of samples strictly below x; equals the CDF's left limit at x.
double fraction_below(std::span<const double> sorted, double x);

// Generalized inverse of the empirical CDF: the smallest sample value whose
// CDF reaches p, so empirical_cdf(quantile(p)) >= p by construction.
double empirical_quantile(std::span<const double> sorted, double p);

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double q01 = 0.0;
    double q10 = 0.0;
    double q50 = 0.0;
};

SummaryStats summarize(std::span<const double> samples);

// Kolmogorov-Smirnov distance between the empirical CDF of sorted samples
// and a reference CDF.
double ks_distance(std::span<const double> sorted,
                   const std::function<double(double)>& cdf);

// Maximum-likelihood fit of a two-parameter Weibull law
// F(x) = 1 - exp(-(x/scale)^shape) to positive samples.  The profile score
// in the shape is strictly increasing, so the root is bracketed and
// bisected; converged is false when no bracket exists or the sample is
// degenerate.
struct WeibullFit {
    double shape = 0.0;
    double scale = 0.0;
    bool converged = false;
    int iterations = 0;
};

WeibullFit weibull_fit_mle(std::span<const double> samples);

// Wilson score interval for a binomial proportion; se is the half-width at
// the requested z, which reduces to the usual binomial standard error for
// n >> z^2.
struct WilsonInterval {
    double estimate = 0.0;
    double se = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

WilsonInterval wilson_interval(double successes, double n, double z = 1.0);

}  // namespace mhop
