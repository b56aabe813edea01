#include "netprice/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netprice/distribution.hpp"
#include "netprice/error.hpp"
#include "netprice/grid.hpp"
#include "netprice/numerics.hpp"

namespace netprice::connectivity {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_price(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << name << "=" << p << " outside [0,1]";
        throw Error(ErrorCode::PriceOutOfRange, msg.str());
    }
}

double quality(double d, double gamma) { return gamma == 1.0 ? d : std::pow(d, gamma); }

DemandEquilibrium separate_at(const Law& law, double gamma, double p1, double p2) {
    DemandEquilibrium out;
    out.d1 = law.cdf(1.0 - p1);
    out.d_s = out.d1;
    if (out.d1 > 0.0) {
        const double threshold = p2 / quality(out.d1, gamma);
        out.d2 = 1.0 - law.cdf(threshold);
    }
    return out;
}

// Interior branch of the bundled coverage equation. The corner D = 1 is
// excluded unless the bundle is priced at the full valuation, so below the
// fold the demand escalates to 1.
double bundle_coverage(const Law& law, double gamma, double p12, int grid_n) {
    if (p12 >= 1.0) return 1.0;
    auto residual = [&](double d) {
        if (d >= 1.0) return -(1.0 - p12);
        return d - law.cdf((1.0 - p12) / (1.0 - quality(d, gamma)));
    };
    return first_crossing_from_top(residual, 0.0, 1.0, grid_n).value_or(1.0);
}

DemandEquilibrium bundle_at(const Law& law, double gamma, double p12, int grid_n,
                            bool closed_form) {
    DemandEquilibrium out;
    double d = 1.0;
    if (closed_form) {
        d = p12 >= 0.75 ? 0.5 * (1.0 + std::sqrt(4.0 * p12 - 3.0)) : 1.0;
    } else {
        d = bundle_coverage(law, gamma, p12, grid_n);
    }
    out.d12 = d;
    out.d_s = d;
    if (d < 1.0) {
        out.residual = std::abs(d - law.cdf((1.0 - p12) / (1.0 - quality(d, gamma))));
    }
    return out;
}

struct HybridSplit {
    double d1 = 0.0;
    double d12 = 0.0;
    double device_bound = 0.0;  // alpha below which device-only beats the bundle
    double bundle_bound = 0.0;  // alpha above which the bundle is unaffordable
};

HybridSplit hybrid_split(const Law& law, double gamma, double p1, double p12, double coverage) {
    HybridSplit s;
    const double q = quality(coverage, gamma);
    const double increment = p12 - p1;
    if (q > 0.0) {
        s.device_bound = increment / q;
    } else {
        s.device_bound = increment > 0.0 ? kInf : 0.0;
    }
    s.bundle_bound = q < 1.0 ? (1.0 - p12) / (1.0 - q) : kInf;
    s.d1 = law.cdf(std::min(1.0 - p1, s.device_bound));
    s.d12 = law.mass(s.device_bound, s.bundle_bound);
    return s;
}

DemandEquilibrium hybrid_at(const Law& law, double gamma, double p1, double p12, int grid_n) {
    auto g = [&](double d) {
        const HybridSplit s = hybrid_split(law, gamma, p1, p12, d);
        return s.d1 + s.d12;
    };
    const double coverage = largest_fixed_point_monotone(g, 0.0, 1.0, grid_n);
    const HybridSplit s = hybrid_split(law, gamma, p1, p12, coverage);
    DemandEquilibrium out;
    out.d1 = s.d1;
    out.d12 = s.d12;
    out.d_s = s.d1 + s.d12;
    out.residual = std::abs(coverage - out.d_s);
    return out;
}

double separate_profit_closed(double p1, double c1, double c2) {
    const double u = 1.0 - p1;
    const double service = u > 0.0 ? (u - c2) * (u - c2) / (4.0 * u) : 0.0;
    return (p1 - c1) * u + service;
}

StrategySolution device_only(const Law& law, double c1, bool closed_form,
                             const SolverOptions& opt) {
    StrategySolution sol;
    sol.strategy = Strategy::DeviceOnly;
    sol.service_offered = false;
    double p1 = 0.5 * (1.0 + c1);
    if (!closed_form) {
        const grid::Axis ax = grid::Axis::with_step(0.0, 1.0, opt.coarse_step);
        const grid::Best best = grid::argmax_1d_refined(
            ax, opt.refine_points, opt.refine_rounds,
            [&](double p) { return (p - c1) * law.cdf(1.0 - p); });
        p1 = best.x;
    }
    sol.prices.p1 = p1;
    sol.demands.d1 = law.cdf(1.0 - p1);
    sol.demands.d_s = sol.demands.d1;
    sol.profit = closed_form ? 0.25 * (1.0 - c1) * (1.0 - c1) : (p1 - c1) * sol.demands.d1;
    return sol;
}

StrategySolution not_offered_bundle() {
    StrategySolution sol;
    sol.strategy = Strategy::Bundled;
    sol.service_offered = false;
    return sol;
}

}  // namespace

double separate_foc(double p1, double c1, double c2) noexcept {
    const double u = 1.0 - p1;
    const double rational = c2 == 0.0 ? 0.0 : c2 * c2 / (4.0 * u * u);
    return 0.75 - 2.0 * p1 + c1 + rational;
}

CubicDiagnostics separate_cubic(double c1, double c2) noexcept {
    const double a = (19.0 + 4.0 * c1);
    const double b = (14.0 + 8.0 * c1);
    const double q = b / 24.0 - a * a / 576.0;
    const double r = -a * b / 384.0 + std::pow(a / 24.0, 3) + (c2 * c2 + 4.0 * c1 + 3.0) / 16.0;
    CubicDiagnostics out;
    out.kappa = r;
    out.mu = r * r + q * q * q;
    return out;
}

bool service_provided_separate(double c1, double c2) noexcept { return c1 + 2.0 * c2 <= 1.0; }

DemandEquilibrium sep_demands(double p1, double p2, const ConnectivityParams& params) {
    require_valid(params);
    require_unit_price(p1, "p1");
    require_unit_price(p2, "p2");
    const Law law(params.alpha);
    return separate_at(law, params.gamma, p1, p2);
}

StrategySolution sep_optimal(const ConnectivityParams& params, const SolverOptions& opt) {
    require_valid(params);
    const double c1 = params.c1, c2 = params.c2;
    const Law law(params.alpha);
    const bool closed = params.closed_form();
    StrategySolution fallback = device_only(law, c1, closed, opt);

    if (closed) {
        CubicDiagnostics diag = separate_cubic(c1, c2);
        const double hi = 1.0 - c2;
        std::vector<double> roots;
        if (hi > 0.0) {
            roots = scan_roots([&](double p) { return separate_foc(p, c1, c2); }, 0.0, hi,
                               opt.root_scan);
        }
        diag.root_count_in_feasible = static_cast<int>(roots.size());
        fallback.diagnostics = diag;
        const double h = 1e-4;
        for (double p1 : roots) {
            const double lo_p = std::max(0.0, p1 - h);
            const double hi_p = std::min(hi, p1 + h);
            const double mid = 0.5 * (lo_p + hi_p);
            const double curvature = separate_profit_closed(hi_p, c1, c2) -
                                     2.0 * separate_profit_closed(mid, c1, c2) +
                                     separate_profit_closed(lo_p, c1, c2);
            if (curvature >= 0.0) continue;
            if (!(separate_profit_closed(p1, c1, c2) > fallback.profit)) break;
            StrategySolution sol;
            sol.strategy = Strategy::Separate;
            sol.prices.p1 = p1;
            sol.prices.p2 = 0.5 * (1.0 + c2 - p1);
            sol.demands = separate_at(law, params.gamma, p1, *sol.prices.p2);
            sol.profit = menu_profit(sol.prices, sol.demands, c1, c2);
            sol.diagnostics = diag;
            return sol;
        }
        return fallback;
    }

    const grid::Axis ax = grid::Axis::with_step(0.0, 1.0, opt.coarse_step);
    auto profit = [&](double p1, double p2) {
        const DemandEquilibrium d = separate_at(law, params.gamma, p1, p2);
        return (p1 - c1) * d.d1 + (p2 - c2) * d.d2;
    };
    const grid::Best best = grid::argmax_2d_refined(ax, ax, opt.refine_points, opt.refine_rounds,
                                                    profit);
    const DemandEquilibrium d = separate_at(law, params.gamma, best.x, best.y);
    if (d.d2 > 0.0 && best.value > fallback.profit) {
        StrategySolution sol;
        sol.strategy = Strategy::Separate;
        sol.prices.p1 = best.x;
        sol.prices.p2 = best.y;
        sol.demands = d;
        sol.profit = best.value;
        return sol;
    }
    return fallback;
}

DemandEquilibrium bundle_demand(double p12, const ConnectivityParams& params,
                                const SolverOptions& opt) {
    require_valid(params);
    require_unit_price(p12, "p12");
    const Law law(params.alpha);
    return bundle_at(law, params.gamma, p12, opt.fixed_point_grid, params.closed_form());
}

StrategySolution bundle_optimal(const ConnectivityParams& params, const SolverOptions& opt) {
    require_valid(params);
    const double cost = params.c1 + params.c2;
    if (cost > 1.0) return not_offered_bundle();
    StrategySolution sol;
    sol.strategy = Strategy::Bundled;
    const Law law(params.alpha);
    if (params.closed_form()) {
        sol.prices.p12 = 1.0;
        sol.demands.d12 = 1.0;
        sol.demands.d_s = 1.0;
        sol.profit = 1.0 - params.c1 - params.c2;
        return sol;
    }
    const grid::Axis ax = grid::Axis::with_step(0.0, 1.0, opt.coarse_step);
    const int n = opt.search_fixed_point_grid;
    const grid::Best best =
        grid::argmax_1d_refined(ax, opt.refine_points, opt.refine_rounds, [&](double p12) {
            return (p12 - cost) * bundle_at(law, params.gamma, p12, n, false).d12;
        });
    sol.prices.p12 = best.x;
    sol.demands = bundle_at(law, params.gamma, best.x, opt.fixed_point_grid, false);
    sol.profit = (best.x - cost) * sol.demands.d12;
    return sol;
}

HybridDetail hybrid_demands_detail(double p1, double p12, const ConnectivityParams& params,
                                   const SolverOptions& opt) {
    require_valid(params);
    require_unit_price(p1, "p1");
    require_unit_price(p12, "p12");
    if (p12 < p1) {
        std::ostringstream msg;
        msg << "bundle price " << p12 << " below device price " << p1;
        throw Error(ErrorCode::PriceOutOfRange, msg.str());
    }
    const Law law(params.alpha);
    HybridDetail out;
    out.selected = hybrid_at(law, params.gamma, p1, p12, opt.fixed_point_grid);
    auto g = [&](double d) {
        const HybridSplit s = hybrid_split(law, params.gamma, p1, p12, d);
        return s.d1 + s.d12;
    };
    out.coverage_roots = scan_fixed_points(g, 0.0, 1.0, opt.fixed_point_grid).all_roots;
    const HybridSplit s = hybrid_split(law, params.gamma, p1, p12, out.selected.d_s);
    out.device_cap_binds = 1.0 - p1 < s.device_bound;
    out.bundle_cap_binds = s.bundle_bound < law.hi();
    return out;
}

DemandEquilibrium hybrid_demands(double p1, double p12, const ConnectivityParams& params,
                                 const SolverOptions& opt) {
    require_valid(params);
    require_unit_price(p1, "p1");
    require_unit_price(p12, "p12");
    if (p12 < p1) {
        std::ostringstream msg;
        msg << "bundle price " << p12 << " below device price " << p1;
        throw Error(ErrorCode::PriceOutOfRange, msg.str());
    }
    const Law law(params.alpha);
    return hybrid_at(law, params.gamma, p1, p12, opt.fixed_point_grid);
}

StrategySolution hybrid_optimal(const ConnectivityParams& params, const SolverOptions& opt) {
    require_valid(params);
    const double c1 = params.c1, c2 = params.c2;
    const Law law(params.alpha);
    if (c1 + c2 > 1.0) {
        // nobody pays more than 1 for the bundle: only the device line sells
        return device_only(law, c1, params.closed_form(), opt);
    }
    StrategySolution sol;
    sol.strategy = Strategy::Hybrid;
    if (params.closed_form()) {
        const double p1 = 1.0 - 0.5 * c2;
        sol.prices.p1 = p1;
        sol.prices.p12 = 1.0;
        sol.demands.d1 = 0.5 * c2;
        sol.demands.d12 = 1.0 - 0.5 * c2;
        sol.demands.d_s = 1.0;
        sol.profit = 1.0 - c1 - c2 + 0.25 * c2 * c2;
        sol.degenerate_to_bundle = c2 == 0.0;
        return sol;
    }
    const grid::Axis ax = grid::Axis::with_step(0.0, 1.0, opt.coarse_step);
    const int n = opt.search_fixed_point_grid;
    auto profit = [&](double p1, double p12) {
        if (p12 < p1) return std::numeric_limits<double>::quiet_NaN();
        const DemandEquilibrium d = hybrid_at(law, params.gamma, p1, p12, n);
        return (p1 - c1) * d.d1 + (p12 - c1 - c2) * d.d12;
    };
    grid::Best best = grid::argmax_2d_refined(ax, ax, opt.refine_points, opt.refine_rounds, profit);
    const StrategySolution bundle = bundle_optimal(params, opt);
    if (bundle.service_offered && bundle.profit > best.value) {
        sol.prices.p1 = *bundle.prices.p12;
        sol.prices.p12 = *bundle.prices.p12;
        sol.demands = bundle.demands;
        sol.profit = bundle.profit;
        sol.degenerate_to_bundle = true;
        return sol;
    }
    sol.prices.p1 = best.x;
    sol.prices.p12 = best.y;
    sol.demands = hybrid_at(law, params.gamma, best.x, best.y, opt.fixed_point_grid);
    sol.profit = (best.x - c1) * sol.demands.d1 + (best.y - c1 - c2) * sol.demands.d12;
    sol.degenerate_to_bundle = sol.demands.d1 <= 1e-9;
    return sol;
}

Comparison compare_connectivity(const ConnectivityParams& params, const SolverOptions& opt) {
    require_valid(params);
    Comparison out;
    out.separate = sep_optimal(params, opt);
    out.bundled = bundle_optimal(params, opt);
    out.hybrid = hybrid_optimal(params, opt);
    out.bundled_threshold = (1.0 - params.c1) * (3.0 + params.c1) / 4.0;
    out.total_cost = params.c1 + params.c2;
    out.small_service_cost = params.c2 < 0.05;

    double best = out.separate->profit;
    if (out.bundled->service_offered) best = std::max(best, out.bundled->profit);
    if (out.hybrid->service_offered) best = std::max(best, out.hybrid->profit);
    auto ties = [&](const StrategySolution& s) {
        return s.service_offered && s.profit >= best - kTieTol;
    };
    const bool sep = out.separate->profit >= best - kTieTol;
    const bool bun = ties(*out.bundled);
    bool hyb = ties(*out.hybrid);
    // a hybrid menu matching the pure bundle sells no device-only units
    if (bun && hyb) hyb = false;
    if (hyb) {
        out.winner = Strategy::Hybrid;
    } else if (sep) {
        out.winner = Strategy::Separate;
    } else {
        out.winner = Strategy::Bundled;
    }
    return out;
}

}  // namespace netprice::connectivity
