#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "netprice/connectivity.hpp"
#include "netprice/content.hpp"
#include "netprice/params.hpp"
#include "netprice/solution.hpp"

namespace netprice::regime {

/// One swept parameter. Connectivity names: c1, c2, gamma, alpha_mean,
/// alpha_stddev. Content names: c1, c2, lambda, theta_bar, omega, gamma,
/// r1_mean, r1_stddev, r2_mean, r2_stddev.
struct SweepAxis {
    std::string param;
    double lo = 0.0;
    double hi = 1.0;
    int n = 21;

    double at(int i) const noexcept;
};

struct SweepSpec {
    Model model = Model::Connectivity;
    SweepAxis x{"c1", 0.0, 1.0, 21};
    SweepAxis y{"c2", 0.0, 1.0, 21};
    ConnectivityParams connectivity;  // fixed values for the connectivity model
    ContentParams content;            // fixed values for the content model
    /// Strategies compared in each cell; separate is ignored for content.
    std::vector<Strategy> strategies{Strategy::Separate, Strategy::Bundled, Strategy::Hybrid};
    connectivity::SolverOptions connectivity_options;
    content::SolverOptions content_options;
};

/// Throws Error(Validation) naming the offending field.
void validate_sweep(const SweepSpec& spec);

/// Sets a named parameter; throws Error(Validation) for unknown names.
void set_param(ConnectivityParams& params, const std::string& name, double value);
void set_param(ContentParams& params, const std::string& name, double value);

struct Cell {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> profit_separate;
    std::optional<double> profit_bundled;
    std::optional<double> profit_hybrid;
    std::optional<Strategy> winner;  // empty when the cell failed
    std::string winner_label;
    // analytic reference values at this cell
    std::optional<double> bundled_threshold;
    std::optional<double> total_cost;
    std::optional<bool> degeneration_condition;
    /// An analytic boundary passes between this cell and a lattice neighbour.
    bool on_analytic_boundary = false;
    std::string diagnostic;  // solver error message, if any
};

struct RegimeMap {
    SweepSpec spec;
    std::vector<Cell> cells;  // row-major, x index outer

    const Cell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(ix) * spec.y.n + iy]; }
};

RegimeMap sweep(const SweepSpec& spec);

/// Writes the CSV and returns the byte count. Throws Error(Sink) on failure.
std::size_t emit_csv(const RegimeMap& map, std::ostream& out);
std::size_t emit_csv(const RegimeMap& map, const std::string& path);

}  // namespace netprice::regime
