#include "netprice/solution.hpp"

namespace netprice {

std::string_view to_string(BundleRegime r) noexcept {
    switch (r) {
        case BundleRegime::High: return "high";
        case BundleRegime::Medium: return "medium";
        case BundleRegime::Low: return "low";
    }
    return "unknown";
}

double menu_profit(const PriceProfile& prices, const DemandEquilibrium& d, double c1, double c2) {
    double profit = 0.0;
    if (prices.p1) profit += (*prices.p1 - c1) * d.d1;
    if (prices.p2) profit += (*prices.p2 - c2) * d.d2;
    if (prices.p12) profit += (*prices.p12 - c1 - c2) * d.d12;
    return profit;
}

std::string_view Comparison::winner_label() const noexcept {
    const std::optional<StrategySolution>* chosen = &separate;
    if (winner == Strategy::Bundled) chosen = &bundled;
    if (winner == Strategy::Hybrid) chosen = &hybrid;
    if (*chosen && (*chosen)->strategy == Strategy::DeviceOnly) return to_string(Strategy::DeviceOnly);
    return to_string(winner);
}

}  // namespace netprice
