#include "netprice/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "netprice/distribution.hpp"
#include "netprice/error.hpp"
#include "netprice/grid.hpp"

namespace netprice::oracle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void finish(PopulationGrid& pop) {
    pop.cumulative.assign(pop.users.size() + 1, 0.0);
    for (std::size_t i = 0; i < pop.users.size(); ++i) {
        pop.cumulative[i + 1] = pop.cumulative[i] + pop.users[i].weight;
    }
}

double require_price(const std::optional<double>& p, const char* name) {
    if (!p) {
        std::ostringstream msg;
        msg << "price " << name << " is required for this strategy";
        throw Error(ErrorCode::Validation, msg.str());
    }
    if (!(*p >= 0.0)) {
        std::ostringstream msg;
        msg << "price " << name << "=" << *p << " is negative";
        throw Error(ErrorCode::PriceOutOfRange, msg.str());
    }
    return *p;
}

double quality(double d, double gamma) { return gamma == 1.0 ? d : std::pow(d, gamma); }

using Response = std::function<DemandEquilibrium(double)>;

// Connectivity choices written as predicates monotone in alpha, shared by the
// per-user loop and the sorted-threshold counter so both agree exactly.
struct ConnectivityRules {
    Strategy strategy;
    double p1 = 0.0, p2 = 0.0, p12 = 0.0;

    DemandEquilibrium loop(const PopulationGrid& pop, double q) const {
        DemandEquilibrium d;
        for (const User& u : pop.users) {
            const double a = u.a;
            switch (strategy) {
                case Strategy::Separate:
                    if (a <= 1.0 - p1) d.d1 += u.weight;
                    if (a * q >= p2) d.d2 += u.weight;
                    break;
                case Strategy::DeviceOnly:
                    if (a <= 1.0 - p1) d.d1 += u.weight;
                    break;
                case Strategy::Bundled:
                    if (a * (1.0 - q) <= 1.0 - p12) d.d12 += u.weight;
                    break;
                case Strategy::Hybrid:
                    if (a * q >= p12 - p1 && a * (1.0 - q) <= 1.0 - p12) {
                        d.d12 += u.weight;
                    } else if (a <= 1.0 - p1) {
                        d.d1 += u.weight;
                    }
                    break;
            }
        }
        return d;
    }

    DemandEquilibrium fast(const PopulationGrid& pop, double q) const {
        const auto& us = pop.users;
        auto prefix = [&](auto pred) {
            const auto it = std::partition_point(us.begin(), us.end(),
                                                 [&](const User& u) { return pred(u.a); });
            return static_cast<std::size_t>(it - us.begin());
        };
        auto weight = [&](std::size_t lo, std::size_t hi) {
            return hi > lo ? pop.cumulative[hi] - pop.cumulative[lo] : 0.0;
        };
        const std::size_t n = us.size();
        const std::size_t device = prefix([&](double a) { return a <= 1.0 - p1; });
        DemandEquilibrium d;
        switch (strategy) {
            case Strategy::Separate: {
                const std::size_t no_service = prefix([&](double a) { return !(a * q >= p2); });
                d.d1 = weight(0, device);
                d.d2 = weight(no_service, n);
                break;
            }
            case Strategy::DeviceOnly:
                d.d1 = weight(0, device);
                break;
            case Strategy::Bundled:
                d.d12 = weight(0, prefix([&](double a) { return a * (1.0 - q) <= 1.0 - p12; }));
                break;
            case Strategy::Hybrid: {
                const std::size_t below = prefix([&](double a) { return !(a * q >= p12 - p1); });
                const std::size_t afford = prefix([&](double a) { return a * (1.0 - q) <= 1.0 - p12; });
                d.d12 = weight(below, afford);
                // device-only: cheap enough and not in the bundle interval
                d.d1 = weight(0, std::min(device, below));
                if (afford < device && afford > below) d.d1 += weight(afford, device);
                break;
            }
        }
        return d;
    }
};

BestResponseTrace iterate(const Response& respond, double start, const BestResponseOptions& opt) {
    BestResponseTrace trace;
    double d = start;
    double prev = kNaN;
    bool damp = false;
    for (int k = 0; k < opt.cap; ++k) {
        DemandEquilibrium r = respond(d);
        trace.iterations = k + 1;
        if (opt.keep_path) trace.demand_path.push_back(r);
        double next = r.d_s;
        if (std::abs(next - d) <= opt.tol) {
            trace.converged = true;
            trace.final = r;
            return trace;
        }
        if (!damp && std::abs(next - prev) <= opt.tol) {
            damp = true;
            trace.damped = true;
        }
        if (damp) next = 0.5 * (d + next);
        prev = d;
        d = next;
        trace.final = r;
    }
    return trace;
}

double start_value(Start start, const BestResponseOptions& opt) {
    switch (start) {
        case Start::FromZero: return 0.0;
        case Start::FromFull: return 1.0;
        case Start::Seed: return opt.seed;
    }
    return 1.0;
}

BestResponseOptions search_options() {
    BestResponseOptions o;
    o.keep_path = false;
    return o;
}

StrategySolution package(Strategy strategy, const PriceProfile& prices, const DemandEquilibrium& d,
                         double c1, double c2) {
    StrategySolution sol;
    sol.strategy = strategy;
    sol.prices = prices;
    sol.demands = d;
    sol.profit = menu_profit(prices, d, c1, c2);
    sol.service_offered = d.d2 > 0.0 || d.d12 > 0.0;
    sol.degenerate_to_bundle = strategy == Strategy::Hybrid && d.d1 <= 0.0;
    return sol;
}

void require_step(double step) {
    if (!(step > 0.0 && step <= 1e-2)) {
        std::ostringstream msg;
        msg << "price_step=" << step << " must lie in (0, 0.01]";
        throw Error(ErrorCode::Validation, msg.str());
    }
}

}  // namespace

PopulationGrid build_population(const ConnectivityParams& params, int n_users) {
    require_valid(params);
    if (n_users < 1) throw Error(ErrorCode::Validation, "n_users must be positive");
    const Law law(params.alpha);
    PopulationGrid pop;
    pop.model = Model::Connectivity;
    pop.users.resize(static_cast<std::size_t>(n_users));
    const double w = 1.0 / n_users;
    for (int i = 0; i < n_users; ++i) {
        pop.users[i] = {law.quantile((i + 0.5) * w), 0.0, w};
    }
    finish(pop);
    return pop;
}

PopulationGrid build_population(const ContentParams& params, int n_users) {
    require_valid(params);
    if (n_users < 1) throw Error(ErrorCode::Validation, "n_users must be positive");
    const Law r1(params.r1), r2(params.r2);
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_users)))));
    PopulationGrid pop;
    pop.model = Model::Content;
    pop.side = side;
    const double w = 1.0 / (static_cast<double>(side) * side);
    std::vector<double> xs(side), ys(side);
    for (int i = 0; i < side; ++i) {
        xs[i] = r1.quantile((i + 0.5) / side);
        ys[i] = r2.quantile((i + 0.5) / side);
    }
    pop.users.reserve(static_cast<std::size_t>(side) * side);
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) pop.users.push_back({xs[i], ys[j], w});
    }
    finish(pop);
    return pop;
}

BestResponseTrace best_response_equilibrium(const PopulationGrid& pop, Strategy strategy,
                                            const PriceProfile& prices,
                                            const ConnectivityParams& params, Start start,
                                            const BestResponseOptions& opt) {
    require_valid(params);
    if (pop.model != Model::Connectivity) {
        throw Error(ErrorCode::Validation, "population was built for the content model");
    }
    ConnectivityRules rules{strategy};
    switch (strategy) {
        case Strategy::Separate:
            rules.p1 = require_price(prices.p1, "p1");
            rules.p2 = require_price(prices.p2, "p2");
            break;
        case Strategy::DeviceOnly: rules.p1 = require_price(prices.p1, "p1"); break;
        case Strategy::Bundled: rules.p12 = require_price(prices.p12, "p12"); break;
        case Strategy::Hybrid:
            rules.p1 = require_price(prices.p1, "p1");
            rules.p12 = require_price(prices.p12, "p12");
            break;
    }
    const double gamma = params.gamma;
    Response respond = [&](double ds) {
        const double q = quality(ds, gamma);
        DemandEquilibrium d = opt.fast_path ? rules.fast(pop, q) : rules.loop(pop, q);
        switch (strategy) {
            case Strategy::Separate:
            case Strategy::DeviceOnly: d.d_s = d.d1; break;
            case Strategy::Bundled: d.d_s = d.d12; break;
            case Strategy::Hybrid: d.d_s = d.d1 + d.d12; break;
        }
        d.residual = std::abs(d.d_s - ds);
        return d;
    };
    return iterate(respond, start_value(start, opt), opt);
}

BestResponseTrace best_response_equilibrium(const PopulationGrid& pop, Strategy strategy,
                                            const PriceProfile& prices,
                                            const ContentParams& params, Start start,
                                            const BestResponseOptions& opt) {
    require_valid(params);
    if (pop.model != Model::Content) {
        throw Error(ErrorCode::Validation, "population was built for the connectivity model");
    }
    double p1 = 0.0, p12 = 0.0;
    switch (strategy) {
        case Strategy::Separate:
            throw Error(ErrorCode::Unsupported, "the content model has no separate service");
        case Strategy::DeviceOnly: p1 = require_price(prices.p1, "p1"); break;
        case Strategy::Bundled: p12 = require_price(prices.p12, "p12"); break;
        case Strategy::Hybrid:
            p1 = require_price(prices.p1, "p1");
            p12 = require_price(prices.p12, "p12");
            break;
    }
    const double omega = params.omega, lambda = params.lambda, gamma = params.gamma;
    Response respond = [&](double ds) {
        const double ext = lambda * quality(ds, gamma);
        DemandEquilibrium d;
        for (const User& u : pop.users) {
            const double u1 = u.a - p1;
            const double u12 = omega * (u.a + u.b + ext) - p12;
            switch (strategy) {
                case Strategy::DeviceOnly:
                    if (u1 >= 0.0) d.d1 += u.weight;
                    break;
                case Strategy::Bundled:
                    if (u12 >= 0.0) d.d12 += u.weight;
                    break;
                default:
                    if (u12 >= 0.0 && u12 >= u1) {
                        d.d12 += u.weight;
                    } else if (u1 >= 0.0) {
                        d.d1 += u.weight;
                    }
                    break;
            }
        }
        d.d_s = d.d12;
        d.residual = std::abs(d.d_s - ds);
        return d;
    };
    return iterate(respond, start_value(start, opt), opt);
}

StrategySolution grid_search_optimal(const PopulationGrid& pop, Strategy strategy,
                                     const ConnectivityParams& params, double price_step) {
    require_valid(params);
    require_step(price_step);
    const double c1 = params.c1, c2 = params.c2;
    const BestResponseOptions o = search_options();
    auto solve = [&](const PriceProfile& pr) {
        return best_response_equilibrium(pop, strategy, pr, params, Start::FromFull, o).final;
    };
    const grid::Axis ax = grid::Axis::with_step(0.0, 1.0, price_step);
    PriceProfile best_prices;
    switch (strategy) {
        case Strategy::Separate: {
            const grid::Best b = grid::argmax_2d(ax, ax, [&](double p1, double p2) {
                PriceProfile pr{p1, p2, std::nullopt};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {b.x, b.y, std::nullopt};
            break;
        }
        case Strategy::DeviceOnly: {
            const grid::Best b = grid::argmax_1d(ax, [&](double p1) {
                PriceProfile pr{p1, std::nullopt, std::nullopt};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {b.x, std::nullopt, std::nullopt};
            break;
        }
        case Strategy::Bundled: {
            const grid::Best b = grid::argmax_1d(ax, [&](double p12) {
                PriceProfile pr{std::nullopt, std::nullopt, p12};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {std::nullopt, std::nullopt, b.x};
            break;
        }
        case Strategy::Hybrid: {
            const grid::Best b = grid::argmax_2d(ax, ax, [&](double p1, double p12) {
                if (p12 < p1) return kNaN;
                PriceProfile pr{p1, std::nullopt, p12};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {b.x, std::nullopt, b.y};
            break;
        }
    }
    return package(strategy, best_prices, solve(best_prices), c1, c2);
}

StrategySolution grid_search_optimal(const PopulationGrid& pop, Strategy strategy,
                                     const ContentParams& params, double price_step) {
    require_valid(params);
    require_step(price_step);
    if (strategy == Strategy::Separate) {
        throw Error(ErrorCode::Unsupported, "the content model has no separate service");
    }
    const double c1 = params.c1, c2 = params.c2;
    const BestResponseOptions o = search_options();
    auto solve = [&](const PriceProfile& pr) {
        return best_response_equilibrium(pop, strategy, pr, params, Start::FromFull, o).final;
    };
    const double top = params.omega * (params.theta_bar + 1.0 + params.lambda);
    const grid::Axis device = grid::Axis::with_step(0.0, params.theta_bar, price_step);
    const grid::Axis bundle = grid::Axis::with_step(0.0, top, price_step);
    PriceProfile best_prices;
    switch (strategy) {
        case Strategy::DeviceOnly: {
            const grid::Best b = grid::argmax_1d(device, [&](double p1) {
                PriceProfile pr{p1, std::nullopt, std::nullopt};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {b.x, std::nullopt, std::nullopt};
            break;
        }
        case Strategy::Bundled: {
            const grid::Best b = grid::argmax_1d(bundle, [&](double p12) {
                PriceProfile pr{std::nullopt, std::nullopt, p12};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {std::nullopt, std::nullopt, b.x};
            break;
        }
        default: {
            const grid::Best b = grid::argmax_2d(device, bundle, [&](double p1, double p12) {
                if (p12 < p1) return kNaN;
                PriceProfile pr{p1, std::nullopt, p12};
                return menu_profit(pr, solve(pr), c1, c2);
            });
            best_prices = {b.x, std::nullopt, b.y};
            break;
        }
    }
    return package(strategy, best_prices, solve(best_prices), c1, c2);
}

}  // namespace netprice::oracle
