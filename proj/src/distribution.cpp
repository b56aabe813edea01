#include "netprice/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace netprice {

double erf_diff(double a, double b) noexcept {
    if (a >= 0.0 && b >= 0.0) return std::erfc(a) - std::erfc(b);
    if (a <= 0.0 && b <= 0.0) return std::erfc(-b) - std::erfc(-a);
    return std::erf(b) - std::erf(a);
}

Law::Law(const DistributionSpec& spec) : spec_(spec) {
    if (uniform()) {
        norm_ = spec_.hi - spec_.lo;
    } else {
        scale_ = std::numbers::sqrt2 * spec_.stddev;
        norm_ = erf_diff(z(spec_.lo), z(spec_.hi));
    }
}

double Law::z(double x) const noexcept { return (x - spec_.mean) / scale_; }

double Law::cdf(double x) const noexcept {
    if (x <= spec_.lo) return 0.0;
    if (x >= spec_.hi) return 1.0;
    if (uniform()) return (x - spec_.lo) / norm_;
    return erf_diff(z(spec_.lo), z(x)) / norm_;
}

double Law::pdf(double x) const noexcept {
    if (x < spec_.lo || x > spec_.hi) return 0.0;
    if (uniform()) return 1.0 / norm_;
    const double t = z(x);
    // d/dx erf((x-m)/(sqrt2 s)) = 2/sqrt(pi) * exp(-t^2) / (sqrt2 s)
    return 2.0 * std::exp(-t * t) / (std::sqrt(std::numbers::pi) * scale_ * norm_);
}

double Law::mass(double a, double b) const noexcept {
    a = std::max(a, spec_.lo);
    b = std::min(b, spec_.hi);
    if (!(a < b)) return 0.0;
    if (uniform()) return (b - a) / norm_;
    return erf_diff(z(a), z(b)) / norm_;
}

double Law::quantile(double u) const noexcept {
    if (u <= 0.0) return spec_.lo;
    if (u >= 1.0) return spec_.hi;
    if (uniform()) return spec_.lo + u * norm_;
    double a = spec_.lo;
    double b = spec_.hi;
    for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
        const double m = 0.5 * (a + b);
        if (cdf(m) < u) a = m; else b = m;
    }
    return 0.5 * (a + b);
}

double truncnorm_cdf_mass(const DistributionSpec& spec, double a, double b) {
    return Law(spec).mass(a, b);
}

}  // namespace netprice
