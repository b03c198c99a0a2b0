#pragma once

#include <functional>
#include <span>
#include <string>

#include "sdw/measures.hpp"

namespace sdw {

struct DistributionHandle {
    std::function<double(double)> cdf;
    std::string tag;
};

// CDF of c X + G with X ~ law and G ~ N(0, gaussian_var) independent.
// Degenerate c or variance fall back to the exact branch.
DistributionHandle convolved_cdf(const EntryLaw& law, double scale, double gaussian_var);

// Plain centered Gaussian handle (variance may be 0: point mass at 0).
DistributionHandle gaussian_cdf(double variance);

double ks_statistic(std::span<const double> samples, const DistributionHandle& handle);
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct MomentSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

MomentSummary summarize(std::span<const double> samples);

} // namespace sdw
