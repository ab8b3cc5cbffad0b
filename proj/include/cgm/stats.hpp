#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cgm::stats {

// Exp(rate) distribution function.
double exp_cdf(double rate, double t);

// One-sample Kolmogorov-Smirnov statistic sup_t |F_n(t) - F(t)| against
// Exp(rate). Sorts a copy of the sample.
double ks_statistic_exp(std::span<const double> sample, double rate);

// Asymptotic one-sample critical value c(level)/sqrt(n); c(0.05) = 1.358.
double ks_critical(size_t n, double level = 0.05);

struct Summary {
    size_t n = 0;
    double mean = 0.0;
    double var = 0.0; // unbiased
    double se = 0.0;  // of the mean, i.i.d. assumption
};
Summary summarize(std::span<const double> sample);

// Pearson correlation.
double correlation(std::span<const double> a, std::span<const double> b);

// Standard error of the mean of spatially correlated scalars via a moving
// block bootstrap: blocks of `block` consecutive values are resampled with
// replacement `resamples` times; the SE is the deviation of the resampled
// means. Deterministic given `seed`.
double block_bootstrap_se(std::span<const double> sample, size_t block, size_t resamples,
                          uint64_t seed);

// Effective sample size implied by a bootstrap SE relative to the naive one.
double effective_sample_size(std::span<const double> sample, double bootstrap_se);

} // namespace cgm::stats
