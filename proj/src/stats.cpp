#include "cgm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cgm/rng.hpp"

namespace cgm::stats {

double exp_cdf(double rate, double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * t); }

double ks_statistic_exp(std::span<const double> sample, double rate) {
    if (sample.empty()) throw std::domain_error("ks_statistic_exp: empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        const double f = exp_cdf(rate, s[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_critical(size_t n, double level) {
    // c(level) = sqrt(-ln(level/2)/2), the asymptotic Kolmogorov quantile.
    if (n == 0) throw std::domain_error("ks_critical: n must be positive");
    const double c = std::sqrt(-0.5 * std::log(level / 2.0));
    return c / std::sqrt(static_cast<double>(n));
}

Summary summarize(std::span<const double> sample) {
    Summary s;
    s.n = sample.size();
    if (s.n == 0) return s;
    double acc = 0.0;
    for (double v : sample) acc += v;
    s.mean = acc / static_cast<double>(s.n);
    if (s.n > 1) {
        double sq = 0.0;
        for (double v : sample) sq += (v - s.mean) * (v - s.mean);
        s.var = sq / static_cast<double>(s.n - 1);
        s.se = std::sqrt(s.var / static_cast<double>(s.n));
    }
    return s;
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::domain_error("correlation: need two equal-length samples of size >= 2");
    const Summary sa = summarize(a), sb = summarize(b);
    double cov = 0.0;
    for (size_t i = 0; i < a.size(); ++i) cov += (a[i] - sa.mean) * (b[i] - sb.mean);
    cov /= static_cast<double>(a.size() - 1);
    const double denom = std::sqrt(sa.var * sb.var);
    return denom == 0.0 ? 0.0 : cov / denom;
}

double block_bootstrap_se(std::span<const double> sample, size_t block, size_t resamples,
                          uint64_t seed) {
    if (sample.empty()) throw std::domain_error("block_bootstrap_se: empty sample");
    block = std::min(std::max<size_t>(block, 1), sample.size());
    const size_t nblocks = (sample.size() + block - 1) / block;

    // prefix sums for O(1) block means
    std::vector<double> prefix(sample.size() + 1, 0.0);
    for (size_t i = 0; i < sample.size(); ++i) prefix[i + 1] = prefix[i] + sample[i];

    std::vector<double> means(resamples, 0.0);
    for (size_t r = 0; r < resamples; ++r) {
        double acc = 0.0;
        size_t count = 0;
        for (size_t b = 0; b < nblocks; ++b) {
            const uint64_t h = rng::site_hash(seed, Site{static_cast<int64_t>(r), static_cast<int64_t>(b)});
            const size_t start = static_cast<size_t>(h % (sample.size() - block + 1));
            acc += prefix[start + block] - prefix[start];
            count += block;
        }
        means[r] = acc / static_cast<double>(count);
    }
    const Summary s = summarize(means);
    return std::sqrt(s.var);
}

double effective_sample_size(std::span<const double> sample, double bootstrap_se) {
    const Summary s = summarize(sample);
    if (bootstrap_se <= 0.0 || s.var <= 0.0) return static_cast<double>(s.n);
    return s.var / (bootstrap_se * bootstrap_se);
}

} // namespace cgm::stats
