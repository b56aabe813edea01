#include "netprice/content.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netprice/error.hpp"
#include "netprice/grid.hpp"
#include "netprice/numerics.hpp"

namespace netprice::content {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = 1e-12;

bool closed_hybrid(const ContentParams& p) { return p.closed_form() && p.omega == 1.0; }

void require_prices(double p1, double p12) {
    if (!(p1 >= 0.0) || !(p12 >= 0.0) || !std::isfinite(p1) || !std::isfinite(p12)) {
        std::ostringstream msg;
        msg << "prices must be finite and nonnegative (p1=" << p1 << ", p12=" << p12 << ")";
        throw Error(ErrorCode::PriceOutOfRange, msg.str());
    }
    if (p12 < p1) {
        std::ostringstream msg;
        msg << "bundle price " << p12 << " below device price " << p1;
        throw Error(ErrorCode::PriceOutOfRange, msg.str());
    }
}

bool in_unit(double d) { return d >= -kEps && d <= 1.0 + kEps; }
double clamp01(double d) { return std::clamp(d, 0.0, 1.0); }

// Every equilibrium of D = M(T - lambda*D) for uniform valuations.
std::vector<double> pure_bundle_roots(double T, double theta, double lambda) {
    std::vector<double> out;
    // keep d when its threshold t lies in the piece (t_lo, t_hi]
    auto keep = [&](double d, double t_lo, double t_hi) {
        if (!in_unit(d)) return;
        const double t = T - lambda * d;
        if (t <= t_lo - kEps || t > t_hi + kEps) return;
        out.push_back(clamp01(d));
    };
    if (T - lambda <= 0.0) out.push_back(1.0);
    for (double d : quadratic_roots(lambda * lambda, 2.0 * theta - 2.0 * T * lambda,
                                    T * T - 2.0 * theta)) {
        keep(d, 0.0, 1.0);
    }
    if (theta != lambda) keep((theta + 0.5 - T) / (theta - lambda), 1.0, theta);
    const double u = theta + 1.0 - T;
    for (double d : quadratic_roots(lambda * lambda, 2.0 * lambda * u - 2.0 * theta, u * u)) {
        keep(d, theta, theta + 1.0);
    }
    if (T > theta + 1.0) out.push_back(0.0);
    std::sort(out.begin(), out.end());
    return out;
}

double hybrid_device_closed(double p1, double p12, double d12, double theta, double lambda) {
    if (p1 >= theta) return 0.0;
    return (theta - p1) * clamp01(p12 - p1 - lambda * d12) / theta;
}

HybridContentDetail hybrid_closed(double p1, double p12, const ContentParams& prm) {
    const double theta = prm.theta_bar, lambda = prm.lambda;
    HybridContentDetail out;
    std::vector<HybridCandidate>& cands = out.candidates;
    if (p1 >= theta) {
        for (double d : pure_bundle_roots(p12, theta, lambda)) cands.push_back({"bundle_only", d});
    } else {
        const double s0 = p12 - p1;
        if (s0 >= 1.0) cands.push_back({"none", 0.0});
        if (std::abs(1.0 - lambda) > kEps) {
            const double d = (1.0 - s0 - p1 * p1 / (2.0 * theta)) / (1.0 - lambda);
            const double s = s0 - lambda * d;
            if (in_unit(d) && s >= -kEps && s <= 1.0 + kEps && p12 - lambda * d <= 1.0 + kEps) {
                cands.push_back({"low", clamp01(d)});
            }
        }
        const double a = 1.0 - s0, b = theta - p1;
        std::vector<double> high;
        for (double d : quadratic_roots(lambda * lambda, 2.0 * a * lambda + 2.0 * b * lambda - 2.0 * theta,
                                        a * a + 2.0 * a * b)) {
            const double s = s0 - lambda * d;
            if (in_unit(d) && s >= -kEps && s <= 1.0 + kEps && p12 - lambda * d > 1.0) {
                high.push_back(clamp01(d));
            }
        }
        if (high.size() == 2) {
            const bool larger = p12 - prm.c1 - prm.c2 > lambda * (p1 - prm.c1) * (theta - p1) / theta;
            cands.push_back(larger ? HybridCandidate{"high_large", high[1]}
                                   : HybridCandidate{"high_small", high[0]});
        } else if (high.size() == 1) {
            cands.push_back({"high", high[0]});
        }
        for (double d : pure_bundle_roots(p12, theta, lambda)) {
            if (s0 - lambda * d < 0.0) cands.push_back({"bundle_only", d});
        }
    }
    return out;
}

double demand_residual_hybrid(const Market& m, double p1, double p12, double d12) {
    return std::abs(d12 - m.bundle_mass(p1, p12, m.params().lambda * m.quality(d12)));
}

DemandEquilibrium numeric_hybrid(const Market& m, double p1, double p12, int grid_n) {
    const double lambda = m.params().lambda;
    auto g = [&](double d) { return m.bundle_mass(p1, p12, lambda * m.quality(d)); };
    const double d12 = largest_fixed_point_iterated(g, 0.0, 1.0, grid_n);
    DemandEquilibrium out;
    out.d12 = d12;
    out.d_s = d12;
    out.d1 = m.device_mass(p1, p12, lambda * m.quality(d12));
    out.residual = std::abs(d12 - g(d12));
    return out;
}

DemandEquilibrium numeric_bundle(const Market& m, double p12, int grid_n) {
    const double lambda = m.params().lambda;
    auto g = [&](double d) { return m.pure_bundle_mass(p12, lambda * m.quality(d)); };
    const double d12 = largest_fixed_point_iterated(g, 0.0, 1.0, grid_n);
    DemandEquilibrium out;
    out.d12 = d12;
    out.d_s = d12;
    out.residual = std::abs(d12 - g(d12));
    return out;
}

DemandEquilibrium select_closed(const HybridContentDetail& detail, double p1, double p12,
                                const ContentParams& prm, std::string* branch) {
    DemandEquilibrium out;
    const HybridCandidate* best = nullptr;
    for (const auto& c : detail.candidates) {
        if (!best || c.d12 > best->d12) best = &c;
    }
    if (!best) return out;
    if (branch) *branch = best->branch;
    out.d12 = best->d12;
    out.d_s = best->d12;
    out.d1 = hybrid_device_closed(p1, p12, best->d12, prm.theta_bar, prm.lambda);
    return out;
}

ContentSolution not_offered_bundle() {
    ContentSolution sol;
    sol.strategy = Strategy::Bundled;
    sol.service_offered = false;
    return sol;
}

ContentSolution device_only_content(const ContentParams& prm, const Law& r1,
                                    const SolverOptions& opt) {
    ContentSolution sol;
    sol.strategy = Strategy::DeviceOnly;
    sol.service_offered = false;
    const double theta = prm.theta_bar, c1 = prm.c1;
    double p1 = 0.5 * (theta + c1);
    if (!r1.uniform()) {
        const grid::Axis ax{0.0, theta, opt.bundle_price_points};
        p1 = grid::argmax_1d_refined(ax, opt.numeric_refine_points, opt.numeric_refine_rounds,
                                     [&](double p) { return (p - c1) * (1.0 - r1.cdf(p)); })
                 .x;
    }
    if (c1 >= theta) p1 = theta;
    sol.prices.p1 = p1;
    sol.demands.d1 = 1.0 - r1.cdf(p1);
    sol.profit = (p1 - c1) * sol.demands.d1;
    return sol;
}

}  // namespace

// ---------------------------------------------------------------------------

RegimeDiagnostics classify_regime(double theta, double lambda, double cost, double omega) {
    RegimeDiagnostics d;
    const double c = cost / omega;
    d.high_lhs = 2.0 * theta * c + theta;
    d.high_rhs = 2.0 * (theta * theta + lambda);
    d.low_lhs = 2.0 * (theta * theta + theta * c + lambda);
    d.low_rhs = 3.0 * theta + 4.0 * theta * lambda;
    if (d.high_lhs > d.high_rhs) {
        d.regime = BundleRegime::High;
    } else if (d.low_lhs < d.low_rhs) {
        d.regime = BundleRegime::Low;
    } else {
        d.regime = BundleRegime::Medium;
    }
    return d;
}

RegimeDiagnostics bundled_regime(const ContentParams& params) {
    require_valid(params);
    if (!params.closed_form()) {
        throw Error(ErrorCode::Unsupported,
                    "price regimes are defined for uniform valuations with gamma = 1");
    }
    return classify_regime(params.theta_bar, params.lambda, params.c1 + params.c2, params.omega);
}

double bundle_mass_uniform(double t, double theta) noexcept {
    if (t <= 0.0) return 1.0;
    if (t <= 1.0) return 1.0 - t * t / (2.0 * theta);
    if (t <= theta) return (theta - t + 0.5) / theta;
    if (t <= theta + 1.0) return (theta + 1.0 - t) * (theta + 1.0 - t) / (2.0 * theta);
    return 0.0;
}

double bundle_inverse_price(double d, double theta, double lambda) noexcept {
    double t;
    if (d < 1.0 / (2.0 * theta)) {
        t = theta + 1.0 - std::sqrt(2.0 * theta * d);
    } else if (d <= 1.0 - 1.0 / (2.0 * theta)) {
        t = theta + 0.5 - theta * d;
    } else {
        t = std::sqrt(2.0 * theta * std::max(0.0, 1.0 - d));
    }
    return lambda * d + t;
}

BundleRegime demand_piece(double d, double theta) noexcept {
    if (d < 1.0 / (2.0 * theta)) return BundleRegime::High;
    if (d <= 1.0 - 1.0 / (2.0 * theta)) return BundleRegime::Medium;
    return BundleRegime::Low;
}

double low_regime_equation(double x, double theta, double lambda, double cost) noexcept {
    const double r = std::sqrt(2.0 * theta);
    const double sx = std::sqrt(std::max(0.0, x));
    return 2.0 * r * lambda * x * sx - (2.0 * lambda - cost) * r * sx - 3.0 * theta * x + theta;
}

double low_regime_bundle_price(double p1, double c1, double c2, double theta) noexcept {
    return 0.5 * (1.0 + c2) + (2.0 * c1 - 3.0 * p1) * p1 / (4.0 * theta) + p1;
}

// ---------------------------------------------------------------------------

Market::Market(const ContentParams& params, double quad_tol)
    : params_(params),
      r1_(params.r1),
      r2_(params.r2),
      exact_(params.uniform_valuations()),
      quad_tol_(quad_tol) {}

double Market::quality(double d) const noexcept {
    return params_.gamma == 1.0 ? d : std::pow(std::max(d, 0.0), params_.gamma);
}

double Market::integrate(double a, double b, const double* slope, const double* icpt, int n,
                         bool above) const {
    a = std::max(a, r1_.lo());
    b = std::min(b, r1_.hi());
    if (!(a < b)) return 0.0;
    auto lower = [&](double x) {
        double v = slope[0] * x + icpt[0];
        for (int i = 1; i < n; ++i) v = std::max(v, slope[i] * x + icpt[i]);
        return v;
    };
    auto integrand = [&](double x) {
        const double f = r2_.cdf(lower(x));
        return r1_.pdf(x) * (above ? 1.0 - f : f);
    };
    // kinks: each line meeting the R2 support ends, and pairwise crossings
    double cuts[16];
    int m = 0;
    auto cut = [&](double x) {
        if (x > a && x < b && m < 16) cuts[m++] = x;
    };
    for (int i = 0; i < n; ++i) {
        if (slope[i] != 0.0) {
            cut((r2_.lo() - icpt[i]) / slope[i]);
            cut((r2_.hi() - icpt[i]) / slope[i]);
        }
        for (int j = i + 1; j < n; ++j) {
            if (slope[i] != slope[j]) cut((icpt[j] - icpt[i]) / (slope[i] - slope[j]));
        }
    }
    std::sort(cuts, cuts + m);
    double total = 0.0;
    double left = a;
    for (int i = 0; i <= m; ++i) {
        const double right = i < m ? cuts[i] : b;
        if (right > left) {
            if (exact_) {
                total += (right - left) * integrand(0.5 * (left + right));
            } else {
                total += integrate_1d(integrand, left, right, quad_tol_);
            }
        }
        left = right;
    }
    return total;
}

double Market::pure_bundle_mass(double p12, double ext) const {
    const double slope[1] = {-1.0};
    const double icpt[1] = {p12 / params_.omega - ext};
    return integrate(r1_.lo(), r1_.hi(), slope, icpt, 1, true);
}

double Market::bundle_mass(double p1, double p12, double ext) const {
    const double w = params_.omega;
    const double slope[2] = {-1.0, -(1.0 - 1.0 / w)};
    const double icpt[2] = {p12 / w - ext, (p12 - p1) / w - ext};
    return integrate(r1_.lo(), r1_.hi(), slope, icpt, 2, true);
}

double Market::device_mass(double p1, double p12, double ext) const {
    const double w = params_.omega;
    const double slope[1] = {-(1.0 - 1.0 / w)};
    const double icpt[1] = {(p12 - p1) / w - ext};
    return integrate(p1, r1_.hi(), slope, icpt, 1, false);
}

double bundle_mass_r2_outer(const ContentParams& params, double p12, double ext,
                            double quad_tol) {
    const Law r1(params.r1), r2(params.r2);
    const double t = p12 / params.omega - ext;
    auto integrand = [&](double r) { return r2.pdf(r) * (1.0 - r1.cdf(t - r)); };
    double cuts[4] = {r2.lo(), t - r1.hi(), t - r1.lo(), r2.hi()};
    std::sort(cuts + 1, cuts + 3);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double a = std::clamp(cuts[i], r2.lo(), r2.hi());
        const double b = std::clamp(cuts[i + 1], r2.lo(), r2.hi());
        if (b > a) total += integrate_1d(integrand, a, b, quad_tol);
    }
    return total;
}

// ---------------------------------------------------------------------------

DemandEquilibrium bundled_demand_content(double p12, const ContentParams& params,
                                         const SolverOptions& opt) {
    require_valid(params);
    require_prices(0.0, p12);
    const Market market(params, opt.quad_tol);
    if (params.closed_form()) {
        const auto roots = pure_bundle_roots(p12 / params.omega, params.theta_bar, params.lambda);
        if (!roots.empty()) {
            DemandEquilibrium out;
            out.d12 = roots.back();
            out.d_s = out.d12;
            out.residual = std::abs(out.d12 - market.pure_bundle_mass(p12, params.lambda * out.d12));
            return out;
        }
    }
    return numeric_bundle(market, p12, opt.fixed_point_grid);
}

ContentSolution bundled_optimal_content(const ContentParams& params, const SolverOptions& opt) {
    require_valid(params);
    const double theta = params.theta_bar, lambda = params.lambda, omega = params.omega;
    const double cost = params.c1 + params.c2;
    if (cost >= omega * (theta + 1.0 + lambda)) return not_offered_bundle();

    ContentSolution sol;
    sol.strategy = Strategy::Bundled;
    if (params.closed_form()) {
        const double c = cost / omega;
        std::vector<double> cands = {1.0 / (2.0 * theta), 1.0 - 1.0 / (2.0 * theta), 1.0};
        const double A = theta + 1.0 - c;
        const double disc = 9.0 * theta - 16.0 * lambda * A;
        if (A > 0.0 && disc >= 0.0) {
            const double den = 3.0 * std::sqrt(theta) + std::sqrt(disc);
            cands.push_back(8.0 * A * A / (den * den));
        }
        if (theta != lambda) cands.push_back((theta - c + 0.5) / (2.0 * (theta - lambda)));
        for (double x : scan_roots([&](double x) { return low_regime_equation(x, theta, lambda, c); },
                                   0.0, 1.0 / (2.0 * theta), kScanGrid)) {
            cands.push_back(1.0 - x);
        }
        double best_d = 0.0, best_profit = 0.0;
        for (double d : cands) {
            if (!(d > 0.0 && d <= 1.0)) continue;
            const double profit = (bundle_inverse_price(d, theta, lambda) - c) * d;
            if (profit > best_profit) {
                best_profit = profit;
                best_d = d;
            }
        }
        if (!(best_profit > 0.0)) return not_offered_bundle();
        const double p12 = omega * bundle_inverse_price(best_d, theta, lambda);
        sol.prices.p12 = p12;
        sol.demands.d12 = best_d;
        sol.demands.d_s = best_d;
        const Market market(params, opt.quad_tol);
        sol.demands.residual = std::abs(best_d - market.pure_bundle_mass(p12, lambda * best_d));
        sol.profit = (p12 - cost) * best_d;
        sol.regime = demand_piece(best_d, theta);
        return sol;
    }

    const Market market(params, opt.quad_tol);
    const grid::Axis ax{0.0, omega * (theta + 1.0 + lambda), opt.bundle_price_points};
    const int n = opt.search_fixed_point_grid;
    const grid::Best best = grid::argmax_1d_refined(
        ax, opt.numeric_refine_points, opt.numeric_refine_rounds,
        [&](double p12) { return (p12 - cost) * numeric_bundle(market, p12, n).d12; });
    if (!(best.found && best.value > 0.0)) return not_offered_bundle();
    sol.prices.p12 = best.x;
    sol.demands = numeric_bundle(market, best.x, opt.fixed_point_grid);
    sol.profit = (best.x - cost) * sol.demands.d12;
    if (!(sol.profit > 0.0)) return not_offered_bundle();
    return sol;
}

// ---------------------------------------------------------------------------

HybridContentDetail hybrid_demands_content_detail(double p1, double p12,
                                                  const ContentParams& params,
                                                  const SolverOptions& opt) {
    require_valid(params);
    require_prices(p1, p12);
    const Market market(params, opt.quad_tol);
    if (closed_hybrid(params)) {
        HybridContentDetail detail = hybrid_closed(p1, p12, params);
        if (!detail.candidates.empty()) {
            detail.selected = select_closed(detail, p1, p12, params, &detail.branch);
            detail.selected.residual = demand_residual_hybrid(market, p1, p12, detail.selected.d12);
            return detail;
        }
    }
    HybridContentDetail detail;
    const double lambda = params.lambda;
    auto g = [&](double d) { return market.bundle_mass(p1, p12, lambda * market.quality(d)); };
    for (double d : scan_fixed_points(g, 0.0, 1.0, opt.fixed_point_grid).all_roots) {
        detail.candidates.push_back({"numeric", d});
    }
    detail.selected = numeric_hybrid(market, p1, p12, opt.fixed_point_grid);
    detail.branch = "numeric";
    return detail;
}

DemandEquilibrium hybrid_demands_content(double p1, double p12, const ContentParams& params,
                                         const SolverOptions& opt) {
    return hybrid_demands_content_detail(p1, p12, params, opt).selected;
}

ContentSolution hybrid_optimal_content(const ContentParams& params, const SolverOptions& opt) {
    require_valid(params);
    const double theta = params.theta_bar, lambda = params.lambda, omega = params.omega;
    const double c1 = params.c1, c2 = params.c2;
    const Market market(params, opt.quad_tol);
    const Law r1(params.r1);
    const bool closed = closed_hybrid(params);

    auto demands_at = [&](double p1, double p12, int grid_n) {
        if (closed) {
            const HybridContentDetail detail = hybrid_closed(p1, p12, params);
            if (!detail.candidates.empty()) return select_closed(detail, p1, p12, params, nullptr);
        }
        return numeric_hybrid(market, p1, p12, grid_n);
    };
    const int n = opt.search_fixed_point_grid;
    auto profit = [&](double p1, double p12) {
        if (p12 < p1) return kNaN;
        const DemandEquilibrium d = demands_at(p1, p12, n);
        return (p1 - c1) * d.d1 + (p12 - c1 - c2) * d.d12;
    };

    const double p12_max = omega * (theta + 1.0 + lambda);
    grid::Best best;
    if (closed) {
        const grid::Axis ax{0.0, theta, opt.hybrid_grid};
        const grid::Axis ay{0.0, p12_max, opt.hybrid_grid};
        best = grid::argmax_2d_refined(ax, ay, opt.hybrid_refine_points, opt.hybrid_refine_rounds,
                                       profit);
        if (lambda < 1.0) {
            const grid::Axis line{0.0, theta, opt.low_search_points};
            const grid::Best low = grid::argmax_1d_refined(
                line, opt.low_refine_points, 1,
                [&](double p1) { return profit(p1, low_regime_bundle_price(p1, c1, c2, theta)); });
            if (low.found && low.value > best.value) {
                best = {low.value, low.x, low_regime_bundle_price(low.x, c1, c2, theta), true};
            }
        }
    } else {
        const grid::Axis ax{0.0, theta, opt.numeric_grid};
        const grid::Axis ay{0.0, p12_max, opt.numeric_grid};
        best = grid::argmax_2d_refined(ax, ay, opt.numeric_refine_points,
                                       opt.numeric_refine_rounds, profit);
    }

    const ContentSolution bundle = bundled_optimal_content(params, opt);
    const ContentSolution device = device_only_content(params, r1, opt);

    ContentSolution sol;
    sol.strategy = Strategy::Hybrid;
    double incumbent = -std::numeric_limits<double>::infinity();
    if (bundle.service_offered) {
        sol.prices.p1 = theta;
        sol.prices.p12 = bundle.prices.p12;
        sol.demands = bundle.demands;
        sol.profit = bundle.profit;
        sol.regime = bundle.regime;
        incumbent = bundle.profit;
    }
    if (best.found && best.value > incumbent + kTieTol) {
        sol.prices.p1 = best.x;
        sol.prices.p12 = best.y;
        if (closed) {
            HybridContentDetail detail = hybrid_closed(best.x, best.y, params);
            sol.demands = detail.candidates.empty()
                              ? numeric_hybrid(market, best.x, best.y, opt.fixed_point_grid)
                              : select_closed(detail, best.x, best.y, params, nullptr);
            sol.demands.residual = demand_residual_hybrid(market, best.x, best.y, sol.demands.d12);
        } else {
            sol.demands = numeric_hybrid(market, best.x, best.y, opt.fixed_point_grid);
        }
        sol.profit = menu_profit(sol.prices, sol.demands, c1, c2);
        sol.regime.reset();
        incumbent = sol.profit;
    }
    if (device.profit > incumbent + kTieTol || !(incumbent > -1.0)) return device;
    if (sol.demands.d12 <= 0.0) return device;
    sol.degenerate_to_bundle = sol.demands.d1 <= 1e-9;
    return sol;
}

bool degenerates_to_bundle(const ContentParams& params) {
    require_valid(params);
    if (!params.uniform_valuations() || params.omega != 1.0) {
        throw Error(ErrorCode::Unsupported,
                    "the degeneration condition assumes uniform valuations and omega = 1");
    }
    return params.lambda > 1.5 && 4.0 * params.c1 + params.c2 < 1.0;
}

Comparison compare_content(const ContentParams& params, const SolverOptions& opt) {
    require_valid(params);
    Comparison out;
    out.bundled = bundled_optimal_content(params, opt);
    out.hybrid = hybrid_optimal_content(params, opt);
    const double bundled = out.bundled->service_offered ? out.bundled->profit : 0.0;
    out.winner = out.hybrid->profit > bundled + kTieTol ? Strategy::Hybrid : Strategy::Bundled;
    if (params.uniform_valuations() && params.omega == 1.0) {
        out.degeneration_condition = params.lambda > 1.5 && 4.0 * params.c1 + params.c2 < 1.0;
    }
    return out;
}

}  // namespace netprice::content
