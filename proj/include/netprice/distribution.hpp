#pragma once

#include "netprice/params.hpp"

namespace netprice {

/// Evaluator for a DistributionSpec. Precomputes the truncation normalizer
/// (the erf difference over the support) so repeated cdf calls stay cheap.
class Law {
public:
    explicit Law(const DistributionSpec& spec);

    double lo() const noexcept { return spec_.lo; }
    double hi() const noexcept { return spec_.hi; }
    bool uniform() const noexcept { return spec_.kind == DistKind::Uniform; }
    const DistributionSpec& spec() const noexcept { return spec_; }

    /// Truncation normalizer: hi-lo for uniform, erf(z_hi)-erf(z_lo) otherwise.
    double normalizer() const noexcept { return norm_; }

    double cdf(double x) const noexcept;
    double pdf(double x) const noexcept;
    /// Probability of [a, b] after clamping to the support; 0 when a >= b.
    double mass(double a, double b) const noexcept;
    double quantile(double u) const noexcept;

private:
    double z(double x) const noexcept;

    DistributionSpec spec_;
    double norm_ = 1.0;
    double scale_ = 1.0;  // sqrt(2) * stddev
};

/// erf(b) - erf(a), switching to erfc in the tails to avoid cancellation.
double erf_diff(double a, double b) noexcept;

double truncnorm_cdf_mass(const DistributionSpec& spec, double a, double b);

}  // namespace netprice
