#include <doctest.h>

#include <cmath>
#include <random>

#include "netprice/connectivity.hpp"
#include "netprice/content.hpp"
#include "netprice/error.hpp"
#include "netprice/oracle.hpp"

using namespace netprice;
using namespace netprice::oracle;

namespace {

PriceProfile bundle_price(double p12) { return {std::nullopt, std::nullopt, p12}; }

ConnectivityParams costs(double c1, double c2) {
    ConnectivityParams p;
    p.c1 = c1;
    p.c2 = c2;
    return p;
}

}  // namespace

TEST_CASE("uniform population sits on interval midpoints") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 4);
    REQUIRE(pop.users.size() == 4);
    const double expect[] = {0.125, 0.375, 0.625, 0.875};
    for (int i = 0; i < 4; ++i) {
        CHECK(pop.users[i].a == doctest::Approx(expect[i]).epsilon(1e-15));
        CHECK(pop.users[i].weight == 0.25);
    }
}

TEST_CASE("normal population is symmetric about its mean") {
    ConnectivityParams p;
    p.alpha = DistributionSpec::truncated_normal(0.0, 1.0, 0.5, 0.2);
    const PopulationGrid pop = build_population(p, 2);
    REQUIRE(pop.users.size() == 2);
    CHECK(pop.users[0].a < 0.5);
    CHECK(pop.users[0].a + pop.users[1].a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("content population is a product lattice") {
    const PopulationGrid pop = build_population(ContentParams::uniform(1.5, 0.2, 0.2, 0.2), 1024);
    CHECK(pop.side == 32);
    CHECK(pop.users.size() == 1024);
    for (const User& u : pop.users) CHECK(u.weight == 1.0 / 1024.0);
}

TEST_CASE("population weights sum to one and rebuild identically") {
    ConnectivityParams p;
    p.alpha = DistributionSpec::truncated_normal(0.0, 1.0, 0.3, 0.1);
    const PopulationGrid a = build_population(p, 997);
    const PopulationGrid b = build_population(p, 997);
    CHECK(std::abs(a.cumulative.back() - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < a.users.size(); ++i) {
        CHECK(a.users[i].a == b.users[i].a);
        if (i) CHECK(a.users[i - 1].a <= a.users[i].a);
    }
}

TEST_CASE("bundle dynamics at a price with two equilibria") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 10000);
    const auto zero = best_response_equilibrium(pop, Strategy::Bundled, bundle_price(0.84), ConnectivityParams{}, Start::FromZero);
    CHECK(zero.converged);
    // the small equilibrium of D^2 - D + 0.16 = 0
    CHECK(std::abs(zero.final.d12 - 0.2) <= 2e-4);
    const auto full = best_response_equilibrium(pop, Strategy::Bundled, bundle_price(0.84), ConnectivityParams{}, Start::FromFull);
    CHECK(full.converged);
    // at full coverage every user values the bundle at 1 > 0.84
    CHECK(full.final.d12 == doctest::Approx(1.0));
}

TEST_CASE("bundle dynamics escalate from any positive seed below three quarters") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 10000);
    for (double seed : {1e-3, 0.05, 0.3, 0.7}) {
        BestResponseOptions o;
        o.seed = seed;
        const auto t = best_response_equilibrium(pop, Strategy::Bundled, bundle_price(0.5), ConnectivityParams{}, Start::Seed, o);
        CHECK(t.converged);
        CHECK(t.final.d12 == doctest::Approx(1.0));
    }
}

TEST_CASE("bundle dynamics from full coverage never increase demand") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 2000);
    for (double p12 = 0.75; p12 <= 1.0; p12 += 0.05) {
        const auto t = best_response_equilibrium(pop, Strategy::Bundled, bundle_price(p12), ConnectivityParams{},
                                                 Start::FromFull);
        double prev = 1.0;
        for (const auto& d : t.demand_path) {
            CHECK(d.d_s <= prev + 1e-12);
            prev = d.d_s;
        }
    }
}

TEST_CASE("separate dynamics match the threshold demands") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 10000);
    const auto t = best_response_equilibrium(pop, Strategy::Separate, {0.4, 0.3, std::nullopt}, ConnectivityParams{}, Start::FromZero);
    CHECK(t.converged);
    CHECK(std::abs(t.final.d1 - 0.6) <= 2e-4);
    CHECK(std::abs(t.final.d2 - 0.5) <= 2e-4);
}

TEST_CASE("sorted-threshold counting equals the per-user loop") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ConnectivityParams p;
    p.gamma = 0.7;
    const PopulationGrid pop = build_population(p, 777);
    for (int i = 0; i < 200; ++i) {
        const double p1 = u(rng), p2 = u(rng), p12 = p1 + (1.0 - p1) * u(rng);
        for (Strategy s : {Strategy::Separate, Strategy::Bundled, Strategy::Hybrid, Strategy::DeviceOnly}) {
            const PriceProfile prices{p1, p2, p12};
            BestResponseOptions slow, fast;
            slow.fast_path = false;
            const auto a = best_response_equilibrium(pop, s, prices, p, Start::FromFull, slow);
            const auto b = best_response_equilibrium(pop, s, prices, p, Start::FromFull, fast);
            CHECK(a.iterations == b.iterations);
            CHECK(std::abs(a.final.d1 - b.final.d1) <= 1e-12);
            CHECK(std::abs(a.final.d2 - b.final.d2) <= 1e-12);
            CHECK(std::abs(a.final.d12 - b.final.d12) <= 1e-12);
        }
    }
}

TEST_CASE("oracle demands at closed-form prices match within the discretisation bound") {
    const int n = 5000;
    const PopulationGrid pop = build_population(ConnectivityParams{}, n);
    const double bound = 2.0 / n;
    // separate threshold demands
    for (double p1 : {0.2, 0.4, 0.6}) {
        for (double p2 : {0.1, 0.2}) {
            const DemandEquilibrium ref = connectivity::sep_demands(p1, p2, {});
            const auto t = best_response_equilibrium(pop, Strategy::Separate, {p1, p2, std::nullopt}, ConnectivityParams{}, Start::FromFull);
            CHECK(std::abs(t.final.d1 - ref.d1) <= bound);
            CHECK(std::abs(t.final.d2 - ref.d2) <= bound);
        }
    }
    // hybrid menus at the optimum structure
    for (double c2 : {0.1, 0.4, 0.8}) {
        const auto t = best_response_equilibrium(pop, Strategy::Hybrid, {1.0 - c2 / 2.0, std::nullopt, 1.0}, ConnectivityParams{}, Start::FromFull);
        CHECK(std::abs(t.final.d1 - c2 / 2.0) <= bound);
        CHECK(std::abs(t.final.d12 - (1.0 - c2 / 2.0)) <= bound);
    }
    const auto h = best_response_equilibrium(pop, Strategy::Hybrid, {0.5, std::nullopt, 0.9}, ConnectivityParams{}, Start::FromFull);
    CHECK(std::abs(h.final.d1 - 0.4) <= bound);
    CHECK(std::abs(h.final.d12 - 0.6) <= bound);
}

TEST_CASE("content dynamics agree with the analytic bundle demand") {
    const ContentParams p = ContentParams::uniform(1.5, 0.2, 0.2, 0.2);
    const PopulationGrid pop = build_population(p, 200 * 200);
    const auto t = best_response_equilibrium(pop, Strategy::Bundled, bundle_price(1.2), p, Start::FromFull);
    CHECK(t.converged);
    CHECK(std::abs(t.final.d12 - 1.6 / 2.6) <= 5e-3);
    const DemandEquilibrium h = content::hybrid_demands_content(0.5, 1.0, ContentParams::uniform(1.5, 0.0, 0, 0));
    const ContentParams q = ContentParams::uniform(1.5, 0.0, 0.0, 0.0);
    const auto th = best_response_equilibrium(build_population(q, 200 * 200), Strategy::Hybrid,
                                              {0.5, std::nullopt, 1.0}, q, Start::FromFull);
    CHECK(std::abs(th.final.d1 - h.d1) <= 1e-2);
    CHECK(std::abs(th.final.d12 - h.d12) <= 1e-2);
}

TEST_CASE("content population has no separate menu") {
    const ContentParams p = ContentParams::uniform(1.5, 0.2, 0.2, 0.2);
    const PopulationGrid pop = build_population(p, 100);
    CHECK_THROWS_AS(best_response_equilibrium(pop, Strategy::Separate, {0.5, 0.5, std::nullopt}, p, Start::FromFull),
                    Error);
}

TEST_CASE("iteration cap leaves the trace unconverged") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 1000);
    BestResponseOptions o;
    o.cap = 1;
    const auto t = best_response_equilibrium(pop, Strategy::Bundled, bundle_price(0.84), ConnectivityParams{}, Start::FromZero, o);
    CHECK_FALSE(t.converged);
    CHECK(t.iterations == 1);
}

TEST_CASE("traces are bit-identical across runs") {
    ConnectivityParams p;
    p.gamma = 0.5;
    const PopulationGrid pop = build_population(p, 3000);
    const auto a = best_response_equilibrium(pop, Strategy::Hybrid, {0.4, std::nullopt, 0.7}, p, Start::FromZero);
    const auto b = best_response_equilibrium(pop, Strategy::Hybrid, {0.4, std::nullopt, 0.7}, p, Start::FromZero);
    REQUIRE(a.demand_path.size() == b.demand_path.size());
    for (std::size_t i = 0; i < a.demand_path.size(); ++i) {
        CHECK(a.demand_path[i].d_s == b.demand_path[i].d_s);
    }
}

TEST_CASE("grid search recovers the full-coverage bundle") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 2000);
    for (auto [c1, c2] : {std::pair{0.3, 0.2}, std::pair{0.1, 0.6}, std::pair{0.5, 0.5}}) {
        const StrategySolution s = grid_search_optimal(pop, Strategy::Bundled, costs(c1, c2), 1e-2);
        CHECK(*s.prices.p12 == doctest::Approx(1.0));
        CHECK(s.profit == doctest::Approx(1.0 - c1 - c2).epsilon(1e-9));
    }
}

TEST_CASE("grid search recovers the hybrid menu") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 2000);
    const StrategySolution s = grid_search_optimal(pop, Strategy::Hybrid, costs(0.1, 0.4), 1e-2);
    CHECK(std::abs(*s.prices.p1 - 0.8) <= 1e-2 + 1e-12);
    CHECK(*s.prices.p12 == doctest::Approx(1.0));
    const double ref = connectivity::hybrid_optimal(costs(0.1, 0.4)).profit;
    CHECK(std::abs(s.profit - ref) <= 1e-2 + 2.0 / 2000);
}

TEST_CASE("grid search on the medium content point") {
    const ContentParams p = ContentParams::uniform(1.5, 0.2, 0.2, 0.2);
    const PopulationGrid pop = build_population(p, 1024);
    const StrategySolution s = grid_search_optimal(pop, Strategy::Bundled, p, 1e-2);
    const ContentSolution ref = content::bundled_optimal_content(p);
    CHECK(std::abs(s.profit - ref.profit) <= 2e-2);
    CHECK(std::abs(*s.prices.p12 - 1.2) <= 0.05);
}

TEST_CASE("grid search refuses coarse steps") {
    const PopulationGrid pop = build_population(ConnectivityParams{}, 100);
    CHECK_THROWS_AS(grid_search_optimal(pop, Strategy::Bundled, ConnectivityParams{}, 0.05), Error);
}
