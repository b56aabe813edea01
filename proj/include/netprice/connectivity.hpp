#pragma once

#include <vector>

#include "netprice/params.hpp"
#include "netprice/solution.hpp"

namespace netprice::connectivity {

/// Resolution knobs for the paths without closed forms.
struct SolverOptions {
    double coarse_step = 1e-3;
    int refine_points = 201;  // +-1 coarse cell, i.e. step 1e-5
    int refine_rounds = 1;
    int root_scan = 1000;            // first-order condition scan on [0, 1-c2]
    int fixed_point_grid = 10000;    // single demand queries
    int search_fixed_point_grid = 200;  // demand queries inside price searches
};

DemandEquilibrium sep_demands(double p1, double p2, const ConnectivityParams& params);

StrategySolution sep_optimal(const ConnectivityParams& params, const SolverOptions& opt = {});

/// Sufficient condition for the separate optimum to include the service.
bool service_provided_separate(double c1, double c2) noexcept;

/// First-order condition of separate pricing in p1 after substituting the
/// optimal service price.
double separate_foc(double p1, double c1, double c2) noexcept;

/// Discriminant data of the cubic behind separate_foc.
CubicDiagnostics separate_cubic(double c1, double c2) noexcept;

DemandEquilibrium bundle_demand(double p12, const ConnectivityParams& params,
                                const SolverOptions& opt = {});

StrategySolution bundle_optimal(const ConnectivityParams& params, const SolverOptions& opt = {});

struct HybridDetail {
    DemandEquilibrium selected;
    std::vector<double> coverage_roots;  // every fixed point of the coverage map
    bool device_cap_binds = false;       // device-only set cut by 1-p1 rather than the increment
    bool bundle_cap_binds = false;       // bundle set cut by its participation bound
};

DemandEquilibrium hybrid_demands(double p1, double p12, const ConnectivityParams& params,
                                 const SolverOptions& opt = {});

/// Same equilibrium plus every fixed point and the binding branches.
HybridDetail hybrid_demands_detail(double p1, double p12, const ConnectivityParams& params,
                                   const SolverOptions& opt = {});

StrategySolution hybrid_optimal(const ConnectivityParams& params, const SolverOptions& opt = {});

Comparison compare_connectivity(const ConnectivityParams& params, const SolverOptions& opt = {});

}  // namespace netprice::connectivity
