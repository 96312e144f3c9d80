#include "slfv/stats.hpp"

#include <cmath>

#include "slfv/errors.hpp"

namespace slfv {

Estimate estimate(std::span<const double> xs) {
    if (xs.size() < 2) throw DomainError("estimate needs at least two samples");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    Estimate e;
    e.n = xs.size();
    e.mean = mean;
    e.variance = ss / static_cast<double>(e.n - 1);
    e.ci95 = 1.96 * std::sqrt(e.variance / static_cast<double>(e.n));
    return e;
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("ols: size mismatch");
    if (x.size() < 2) throw DomainError("ols needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("ols: x values are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double sse = std::max(0.0, syy - f.slope * sxy);
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.slope_se = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    return f;
}

double two_proportion_z(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2) {
    if (n1 == 0 || n2 == 0) throw DomainError("two_proportion_z: empty sample");
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double p = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    const double var = p * (1.0 - p) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
    if (!(var > 0.0)) return 0.0;
    return (p1 - p2) / std::sqrt(var);
}

}  // namespace slfv
