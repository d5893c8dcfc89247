#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "antflow/errors.hpp"

namespace antflow::empirics {

namespace detail {
inline void require_positive(std::span<const double> xs) {
    if (xs.size() < 2) throw invalid_argument("at least two samples are required");
    for (double x : xs)
        if (!(x > 0.0)) throw non_positive_sample("samples must be strictly positive");
}
} // namespace detail

// Maximum-likelihood rate of an exponential: 1 / mean.
inline double fit_negative_exponential(std::span<const double> xs) {
    detail::require_positive(xs);
    double sum = 0.0;
    for (double x : xs) sum += x;
    return static_cast<double>(xs.size()) / sum;
}

struct LognormalFit {
    double mu = 0.0;
    double sigma = 0.0;
};

// Maximum likelihood: mean and population standard deviation of log x.
inline LognormalFit fit_lognormal(std::span<const double> xs) {
    detail::require_positive(xs);
    const double n = static_cast<double>(xs.size());
    double mu = 0.0;
    for (double x : xs) mu += std::log(x);
    mu /= n;
    double ss = 0.0;
    for (double x : xs) ss += (std::log(x) - mu) * (std::log(x) - mu);
    return {mu, std::sqrt(ss / n)};
}

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

struct DistributionSummary {
    std::vector<HistogramBin> bins; // contiguous, from the lowest to the highest occupied bin
    double mean = 0.0;
    double variance = 0.0; // unbiased (n - 1); 0 for a single value
};

// Index k of the half-open bin [k w, (k+1) w) holding x. A quotient within
// a relative 1e-9 of an integer is treated as sitting on that edge, so
// decimal edges such as 0.3 / 0.1 land in the upper bin.
inline std::int64_t bin_index(double x, double w) {
    const double q = x / w;
    return static_cast<std::int64_t>(std::floor(q + 1e-9 * std::max(1.0, std::abs(q))));
}

inline DistributionSummary distribution_summary(std::span<const double> values, double bin_width) {
    if (!(bin_width > 0.0)) throw invalid_argument("bin width must be positive");
    if (values.empty()) throw empty_input("no values to summarize");
    DistributionSummary s;
    std::map<std::int64_t, std::size_t> counts;
    double sum = 0.0;
    for (double x : values) {
        ++counts[bin_index(x, bin_width)];
        sum += x;
    }
    const double n = static_cast<double>(values.size());
    s.mean = sum / n;
    double ss = 0.0;
    for (double x : values) ss += (x - s.mean) * (x - s.mean);
    s.variance = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    for (std::int64_t k = counts.begin()->first; k <= counts.rbegin()->first; ++k) {
        const auto it = counts.find(k);
        s.bins.push_back({static_cast<double>(k) * bin_width, static_cast<double>(k + 1) * bin_width,
                          it == counts.end() ? 0 : it->second});
    }
    return s;
}

inline void write_histogram_csv(std::ostream& os, const DistributionSummary& s) {
    os << "bin_lo,bin_hi,count\n";
    char buf[64];
    for (const auto& b : s.bins) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,", b.lo, b.hi);
        os << buf << b.count << '\n';
    }
}

} // namespace antflow::empirics
