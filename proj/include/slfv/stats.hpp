#pragma once

#include <cstddef>
#include <span>

namespace slfv {

struct Estimate {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double ci95 = 0.0;      // half-width, 1.96 * stderr
    std::size_t n = 0;
};

/// Throws DomainError for fewer than two samples.
Estimate estimate(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0;
};

LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Pooled two-proportion z statistic; 0 when both proportions are 0 or 1.
double two_proportion_z(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2);

}  // namespace slfv
