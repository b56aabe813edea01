#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "netprice/params.hpp"

namespace netprice {

enum class BundleRegime { High, Medium, Low };

std::string_view to_string(BundleRegime r) noexcept;

/// Optimal menu for one pricing strategy.
struct StrategySolution {
    Strategy strategy = Strategy::Separate;
    PriceProfile prices;
    DemandEquilibrium demands;
    double profit = 0.0;
    /// false when the service (or the bundle) is not sold at all.
    bool service_offered = true;
    std::optional<CubicDiagnostics> diagnostics;
    std::optional<BundleRegime> regime;
    /// Hybrid only: the optimum sells no device-only units.
    bool degenerate_to_bundle = false;
};

using ContentSolution = StrategySolution;

/// Profit identity over whichever prices are populated.
double menu_profit(const PriceProfile& prices, const DemandEquilibrium& d, double c1, double c2);

/// Two profits closer than this are treated as a tie.
inline constexpr double kTieTol = 1e-12;

struct Comparison {
    std::optional<StrategySolution> separate;
    std::optional<StrategySolution> bundled;
    std::optional<StrategySolution> hybrid;
    Strategy winner = Strategy::Separate;

    // connectivity: bundled beats separate iff bundled_threshold > c2
    std::optional<double> bundled_threshold;
    // connectivity: hybrid wins iff total_cost <= 1
    std::optional<double> total_cost;
    bool small_service_cost = false;  // c2 < 0.05
    // content: sufficient condition for hybrid collapsing onto the bundle
    std::optional<bool> degeneration_condition;

    /// Winner name, or device_only when the winning menu sells no service.
    std::string_view winner_label() const noexcept;
};

}  // namespace netprice
