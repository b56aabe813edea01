#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "netprice/content.hpp"
#include "netprice/error.hpp"

using namespace netprice;
using namespace netprice::content;

namespace {

// Midpoint-lattice estimate of the share of (R1, R2) in [0, theta] x [0, 1]
// satisfying `keep`, for uniform valuations.
template <class F>
double lattice_share(double theta, F&& keep, int n = 1500) {
    double hits = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r1 = theta * (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            const double r2 = (j + 0.5) / n;
            if (keep(r1, r2)) hits += 1.0;
        }
    }
    return hits / (static_cast<double>(n) * n);
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("regime classification of the worked points") {
    CHECK(bundled_regime(ContentParams::uniform(1.5, 0.1, 0.6, 0.6)).regime == BundleRegime::High);
    const RegimeDiagnostics high = classify_regime(1.5, 0.1, 1.2, 1.0);
    CHECK(high.high_lhs == doctest::Approx(5.1));
    CHECK(high.high_rhs == doctest::Approx(4.7));
    CHECK(bundled_regime(ContentParams::uniform(1.5, 0.2, 0.2, 0.2)).regime == BundleRegime::Medium);
    const RegimeDiagnostics low = classify_regime(1.5, 1.0, 0.1, 1.0);
    CHECK(low.regime == BundleRegime::Low);
    CHECK(low.low_lhs == doctest::Approx(6.8));
    CHECK(low.low_rhs == doctest::Approx(10.5));
}

TEST_CASE("regime boundaries belong to the middle regime") {
    // theta = 1, lambda = 0.5, cost = 1 makes both inequalities equalities
    const RegimeDiagnostics d = classify_regime(1.0, 0.5, 1.0, 1.0);
    CHECK(d.high_lhs == d.high_rhs);
    CHECK(d.low_lhs == d.low_rhs);
    CHECK(d.regime == BundleRegime::Medium);
}

TEST_CASE("regime classification needs uniform valuations") {
    ContentParams p = ContentParams::uniform(1.5, 0.2, 0.2, 0.2);
    p.r2 = DistributionSpec::truncated_normal(0.0, 1.0, 0.5, 0.2);
    CHECK(code_of([&] { bundled_regime(p); }) == ErrorCode::Unsupported);
}

TEST_CASE("uniform bundle mass matches a lattice count") {
    for (double t : {0.0, 0.4, 0.9, 1.2, 1.5, 2.0, 2.4, 2.6}) {
        const double ref = lattice_share(1.5, [&](double a, double b) { return a + b >= t; }, 1000);
        CHECK(std::abs(bundle_mass_uniform(t, 1.5) - ref) <= 2e-3);
    }
}

TEST_CASE("medium bundled optimum") {
    const ContentSolution s = bundled_optimal_content(ContentParams::uniform(1.5, 0.2, 0.2, 0.2));
    CHECK(s.service_offered);
    CHECK(*s.prices.p12 == doctest::Approx(1.2).epsilon(1e-10));
    CHECK(s.demands.d12 == doctest::Approx(1.6 / 2.6).epsilon(1e-10));
    CHECK(s.profit == doctest::Approx(0.49231).epsilon(1e-4));
    CHECK(s.regime == BundleRegime::Medium);
}

TEST_CASE("high bundled optimum is an equilibrium at its price") {
    const ContentParams p = ContentParams::uniform(1.5, 0.1, 0.6, 0.6);
    const ContentSolution s = bundled_optimal_content(p);
    CHECK(s.regime == BundleRegime::High);
    CHECK(s.demands.d12 == doctest::Approx(0.2718).epsilon(1e-3));
    CHECK(*s.prices.p12 == doctest::Approx(1.6242).epsilon(1e-3));
    CHECK(s.profit == doctest::Approx(0.1153).epsilon(1e-3));
    const double d = s.demands.d12;
    CHECK(std::abs(d - bundle_mass_uniform(*s.prices.p12 - p.lambda * d, 1.5)) <= 1e-8);
    CHECK(std::abs(bundle_inverse_price(d, 1.5, p.lambda) - *s.prices.p12) <= 1e-8);
}

TEST_CASE("low bundled optimum solves the stationarity condition") {
    const ContentParams p = ContentParams::uniform(1.5, 1.0, 0.05, 0.05);
    const ContentSolution s = bundled_optimal_content(p);
    CHECK(s.regime == BundleRegime::Low);
    const double d = s.demands.d12;
    CHECK(d > 2.0 / 3.0);
    CHECK(d <= 1.0);
    CHECK(std::abs(low_regime_equation(1.0 - d, 1.5, 1.0, 0.1)) <= 1e-9);
    CHECK(std::abs(bundle_inverse_price(d, 1.5, 1.0) - *s.prices.p12) <= 1e-8);
    // price lattice with lattice-count demand as an outside check
    double best = 0.0;
    for (int i = 0; i <= 2700; ++i) {
        const double price = i / 1000.0;
        double lo = 0.0, hi = 1.0;  // largest equilibrium by bisection on the monotone map
        auto g = [&](double x) { return bundle_mass_uniform(price - x, 1.5); };
        if (g(1.0) >= 1.0) {
            lo = 1.0;
        } else {
            for (int k = 0; k < 60; ++k) {
                const double m = 0.5 * (lo + hi);
                if (g(m) >= m) lo = m; else hi = m;
            }
        }
        best = std::max(best, (price - 0.1) * lo);
    }
    CHECK(std::abs(s.profit - best) <= 2e-3);
}

TEST_CASE("returned bundle demand lies in its regime's interval") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double theta = 1.0 + 1.5 * u(rng), lambda = 2.0 * u(rng), c = 2.0 * u(rng);
        const ContentParams p = ContentParams::uniform(theta, lambda, c / 2.0, c / 2.0);
        const ContentSolution s = bundled_optimal_content(p);
        if (!s.service_offered) continue;
        const double d = s.demands.d12;
        REQUIRE(s.regime.has_value());
        CHECK(demand_piece(d, theta) == *s.regime);
        CHECK(std::abs(bundle_inverse_price(d, theta, lambda) - *s.prices.p12) <= 1e-8);
        CHECK(std::abs(s.profit - (*s.prices.p12 - c) * d) <= 1e-10);
    }
}

TEST_CASE("bundle is withdrawn when costs exceed every valuation") {
    const ContentSolution s = bundled_optimal_content(ContentParams::uniform(1.5, 0.2, 1.5, 1.5));
    CHECK_FALSE(s.service_offered);
    CHECK(s.demands.d12 == 0.0);
}

TEST_CASE("hybrid demands at a low bundle price") {
    const ContentParams p = ContentParams::uniform(1.5, 0.0, 0.0, 0.0);
    const DemandEquilibrium d = hybrid_demands_content(0.5, 1.0, p);
    CHECK(d.d12 == doctest::Approx(0.5 - 0.25 / 3.0).epsilon(1e-12));
    CHECK(d.d1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const double bundle = lattice_share(1.5, [](double a, double b) { return a + b >= 1.0 && b >= 0.5; });
    const double device = lattice_share(1.5, [](double a, double b) { return a >= 0.5 && b < 0.5; });
    CHECK(std::abs(d.d12 - bundle) <= 2e-3);
    CHECK(std::abs(d.d1 - device) <= 2e-3);
}

TEST_CASE("no bundle sales when the increment exceeds every service value") {
    const ContentParams p = ContentParams::uniform(1.5, 0.3, 0.0, 0.0);
    const DemandEquilibrium d = hybrid_demands_content(0.3, 1.7, p);
    CHECK(d.d12 == 0.0);
    CHECK(d.d1 == doctest::Approx((1.5 - 0.3) / 1.5).epsilon(1e-12));
}

TEST_CASE("hybrid demand prices are checked") {
    const ContentParams p = ContentParams::uniform(1.5, 0.3, 0.0, 0.0);
    CHECK(code_of([&] { hybrid_demands_content(1.0, 0.5, p); }) == ErrorCode::PriceOutOfRange);
    CHECK(code_of([&] { hybrid_demands_content(-0.1, 0.5, p); }) == ErrorCode::PriceOutOfRange);
}

TEST_CASE("closed-form hybrid demands agree with the region engine") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 150; ++i) {
        const double lambda = 1.2 * u(rng);
        const ContentParams p = ContentParams::uniform(1.5, lambda, 0.1, 0.1);
        const double p1 = 1.5 * u(rng), p12 = p1 + 1.5 * u(rng);
        const HybridContentDetail h = hybrid_demands_content_detail(p1, p12, p);
        const Market m(p);
        const double ext = lambda * h.selected.d12;
        CHECK(std::abs(h.selected.d12 - m.bundle_mass(p1, p12, ext)) <= 1e-9);
        CHECK(std::abs(h.selected.d1 - m.device_mass(p1, p12, ext)) <= 1e-9);
        for (const auto& c : h.candidates) CHECK(c.d12 <= h.selected.d12 + 1e-12);
    }
}

TEST_CASE("region engine matches a lattice count for other correlation factors") {
    for (double omega : {0.8, 1.25}) {
        ContentParams p = ContentParams::uniform(1.5, 0.4, 0.1, 0.1, omega);
        const Market m(p);
        const double p1 = 0.6, p12 = 1.3, ext = 0.2;
        auto u12 = [&](double a, double b) { return omega * (a + b + ext) - p12; };
        const double bundle = lattice_share(1.5, [&](double a, double b) {
            return u12(a, b) >= 0.0 && u12(a, b) >= a - p1;
        });
        const double device = lattice_share(1.5, [&](double a, double b) {
            return a - p1 >= 0.0 && !(u12(a, b) >= 0.0 && u12(a, b) >= a - p1);
        });
        CHECK(std::abs(m.bundle_mass(p1, p12, ext) - bundle) <= 2e-3);
        CHECK(std::abs(m.device_mass(p1, p12, ext) - device) <= 2e-3);
    }
}

TEST_CASE("device sales vanish as the bundle correlation grows") {
    const ContentParams base = ContentParams::uniform(1.5, 0.95, 0.3, 0.3);
    double prev = 2.0;
    for (double omega = 0.6; omega <= 3.0; omega += 0.1) {
        ContentParams p = base;
        p.omega = omega;
        const DemandEquilibrium d = hybrid_demands_content(0.5, 1.2, p);
        CHECK(d.d1 <= prev + 1e-12);
        prev = d.d1;
        // with omega >= 1 the device buyer closest to switching sits at theta = p1, b = 0
        if (omega >= 1.0 && omega >= 1.2 / (0.95 * d.d12 + 0.5)) CHECK(d.d1 == 0.0);
    }
    CHECK(prev == 0.0);
}

TEST_CASE("bundle demand grows with the correlation factor") {
    double prev = -1.0;
    for (double omega : {0.8, 0.9, 1.0, 1.1, 1.2}) {
        const ContentSolution s = bundled_optimal_content(ContentParams::uniform(1.5, 0.95, 0.3, 0.3, omega));
        CHECK(s.demands.d12 >= prev - 1e-12);
        prev = s.demands.d12;
    }
}

TEST_CASE("degeneration condition") {
    CHECK(degenerates_to_bundle(ContentParams::uniform(1.5, 1.6, 0.1, 0.2)));
    CHECK_FALSE(degenerates_to_bundle(ContentParams::uniform(1.5, 1.4, 0.1, 0.2)));
    CHECK_FALSE(degenerates_to_bundle(ContentParams::uniform(1.5, 2.0, 0.3, 0.1)));
    ContentParams p = ContentParams::uniform(1.5, 1.6, 0.1, 0.2, 1.1);
    CHECK(code_of([&] { degenerates_to_bundle(p); }) == ErrorCode::Unsupported);
}

TEST_CASE("hybrid optimum collapses onto the bundle under the degeneration condition") {
    const ContentParams p = ContentParams::uniform(1.5, 1.6, 0.1, 0.2);
    const ContentSolution h = hybrid_optimal_content(p);
    const ContentSolution b = bundled_optimal_content(p);
    CHECK(h.degenerate_to_bundle);
    CHECK(h.demands.d1 <= 1e-6);
    CHECK(std::abs(h.profit - b.profit) <= 1e-6 * (1.0 + std::abs(b.profit)));
}

TEST_CASE("hybrid beats the bundle at high costs") {
    const ContentParams p = ContentParams::uniform(1.5, 0.95, 0.8, 0.8);
    CHECK(hybrid_optimal_content(p).profit > bundled_optimal_content(p).profit + 1e-6);
}

TEST_CASE("device-only sales win when the service is worthless") {
    const ContentParams p = ContentParams::uniform(1.5, 0.0, 0.2, 1.2);
    const ContentSolution h = hybrid_optimal_content(p);
    CHECK(h.strategy == Strategy::DeviceOnly);
    CHECK(*h.prices.p1 == doctest::Approx((1.5 + 0.2) / 2.0).epsilon(1e-9));
    CHECK(h.profit == doctest::Approx((1.5 - 0.2) * (1.5 - 0.2) / 6.0).epsilon(1e-9));
}

TEST_CASE("hybrid profit is never below the bundle profit") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 12; ++i) {
        const ContentParams p = ContentParams::uniform(1.0 + u(rng), 2.0 * u(rng), u(rng), u(rng));
        const ContentSolution h = hybrid_optimal_content(p);
        const ContentSolution b = bundled_optimal_content(p);
        CHECK(h.profit >= (b.service_offered ? b.profit : 0.0) - 1e-12);
        CHECK(std::abs(h.profit - menu_profit(h.prices, h.demands, p.c1, p.c2)) <= 1e-10);
    }
}

TEST_CASE("strategy comparison") {
    Comparison c = compare_content(ContentParams::uniform(1.5, 0.95, 0.1, 0.1));
    CHECK(c.winner == Strategy::Bundled);
    CHECK_FALSE(c.separate.has_value());
    c = compare_content(ContentParams::uniform(1.5, 0.85, 0.9, 0.9));
    CHECK(c.winner == Strategy::Hybrid);
    c = compare_content(ContentParams::uniform(1.5, 2.5, 0.1, 0.1));
    CHECK(c.winner == Strategy::Bundled);
    CHECK(std::abs(c.hybrid->profit - c.bundled->profit) <= 1e-9);
    CHECK(c.degeneration_condition == true);
}

TEST_CASE("normal valuations run through the region engine") {
    ContentParams p = ContentParams::uniform(1.5, 0.5, 0.2, 0.2);
    p.r1 = DistributionSpec::truncated_normal(0.0, 1.5, 0.75, 0.3);
    p.r2 = DistributionSpec::truncated_normal(0.0, 1.0, 0.5, 0.2);
    const ContentSolution b = bundled_optimal_content(p);
    CHECK(b.service_offered);
    CHECK_FALSE(b.regime.has_value());
    CHECK(b.demands.residual <= 1e-8);
    SolverOptions opt;
    opt.numeric_grid = 40;
    const ContentSolution h = hybrid_optimal_content(p, opt);
    CHECK(h.profit >= b.profit - 1e-12);
}
