#pragma once

#include <string>
#include <vector>

#include "netprice/distribution.hpp"
#include "netprice/params.hpp"
#include "netprice/solution.hpp"

namespace netprice::content {

struct SolverOptions {
    // uniform valuations, gamma = 1, omega = 1: closed-form demands
    int hybrid_grid = 500;
    int hybrid_refine_points = 101;
    int hybrid_refine_rounds = 1;
    int low_search_points = 10001;
    int low_refine_points = 101;
    // every other case: demands are fixed points of the region-mass map
    int numeric_grid = 120;
    int numeric_refine_points = 41;
    int numeric_refine_rounds = 3;
    int bundle_price_points = 2001;
    int fixed_point_grid = 10000;
    int search_fixed_point_grid = 100;
    double quad_tol = 1e-9;
};

struct RegimeDiagnostics {
    BundleRegime regime = BundleRegime::Medium;
    double high_lhs = 0.0;  // High iff high_lhs > high_rhs
    double high_rhs = 0.0;
    double low_lhs = 0.0;   // Low iff low_lhs < low_rhs (checked after High)
    double low_rhs = 0.0;
};

/// Classification from the cost/externality inequalities. Pure arithmetic,
/// valid for any parameters.
RegimeDiagnostics classify_regime(double theta_bar, double lambda, double cost, double omega);

/// Throws Error(Unsupported) unless valuations are uniform and gamma = 1.
RegimeDiagnostics bundled_regime(const ContentParams& params);

/// Share of users whose device plus intrinsic service value reaches t
/// (uniform valuations).
double bundle_mass_uniform(double t, double theta_bar) noexcept;

/// Bundle price (omega = 1) that makes d an equilibrium demand.
double bundle_inverse_price(double d, double theta_bar, double lambda) noexcept;

/// Which demand interval d falls in.
BundleRegime demand_piece(double d, double theta_bar) noexcept;

/// Stationarity condition of the low-price bundle in x = 1 - D.
double low_regime_equation(double x, double theta_bar, double lambda, double cost) noexcept;

/// Bundle price maximising the low-regime hybrid profit for a device price.
double low_regime_bundle_price(double p1, double c1, double c2, double theta_bar) noexcept;

/// Region masses for arbitrary valuation laws. `ext` is the externality term
/// lambda * Q(D) already evaluated.
class Market {
public:
    explicit Market(const ContentParams& params, double quad_tol = 1e-9);

    double pure_bundle_mass(double p12, double ext) const;
    double bundle_mass(double p1, double p12, double ext) const;
    double device_mass(double p1, double p12, double ext) const;
    double quality(double d) const noexcept;

    const ContentParams& params() const noexcept { return params_; }
    bool exact() const noexcept { return exact_; }

private:
    // integral over r1 in [a, b] of f1(r1) * w(lower(r1)) where w is the R2
    // tail (above) or cdf (below) and lower is the max of the given lines.
    double integrate(double a, double b, const double* slope, const double* icpt, int n,
                     bool above) const;

    ContentParams params_;
    Law r1_;
    Law r2_;
    bool exact_;
    double quad_tol_;
};

/// R2-outer form of the bundle mass with truncated-normal valuations: the
/// integral over r of f_R2(r) times the R1 mass above t - r.
double bundle_mass_r2_outer(const ContentParams& params, double p12, double ext,
                            double quad_tol = 1e-9);

DemandEquilibrium bundled_demand_content(double p12, const ContentParams& params,
                                         const SolverOptions& opt = {});

ContentSolution bundled_optimal_content(const ContentParams& params, const SolverOptions& opt = {});

struct HybridCandidate {
    std::string branch;  // none, low, high_large, high_small, bundle_only, numeric
    double d12 = 0.0;
};

struct HybridContentDetail {
    DemandEquilibrium selected;
    std::string branch;
    std::vector<HybridCandidate> candidates;  // every consistent equilibrium
};

DemandEquilibrium hybrid_demands_content(double p1, double p12, const ContentParams& params,
                                         const SolverOptions& opt = {});

HybridContentDetail hybrid_demands_content_detail(double p1, double p12,
                                                  const ContentParams& params,
                                                  const SolverOptions& opt = {});

ContentSolution hybrid_optimal_content(const ContentParams& params, const SolverOptions& opt = {});

/// Sufficient condition for the hybrid optimum to sell no device-only units.
bool degenerates_to_bundle(const ContentParams& params);

Comparison compare_content(const ContentParams& params, const SolverOptions& opt = {});

}  // namespace netprice::content
