#pragma once

#include <vector>

#include "netprice/params.hpp"
#include "netprice/solution.hpp"

namespace netprice::oracle {

/// Connectivity users carry alpha in `a`; content users carry (R1, R2) in (a, b).
struct User {
    double a = 0.0;
    double b = 0.0;
    double weight = 0.0;
};

/// Deterministic quantile discretisation of the user population. Connectivity
/// users are sorted by alpha.
struct PopulationGrid {
    Model model = Model::Connectivity;
    std::vector<User> users;
    std::vector<double> cumulative;  // cumulative[i] = weight of users[0..i)
    int side = 0;                    // content lattice side
};

enum class Start { FromZero, FromFull, Seed };

struct BestResponseOptions {
    int cap = 100000;
    double tol = 1e-9;
    double seed = 0.5;       // initial contributor share for Start::Seed
    bool keep_path = true;
    bool fast_path = true;   // sorted-threshold counting for connectivity
};

struct BestResponseTrace {
    int iterations = 0;
    std::vector<DemandEquilibrium> demand_path;
    bool converged = false;
    bool damped = false;  // a period-2 cycle switched on averaging
    DemandEquilibrium final;
};

PopulationGrid build_population(const ConnectivityParams& params, int n_users);
/// n_users is rounded to the nearest square lattice.
PopulationGrid build_population(const ContentParams& params, int n_users);

BestResponseTrace best_response_equilibrium(const PopulationGrid& pop, Strategy strategy,
                                            const PriceProfile& prices,
                                            const ConnectivityParams& params, Start start,
                                            const BestResponseOptions& opt = {});
BestResponseTrace best_response_equilibrium(const PopulationGrid& pop, Strategy strategy,
                                            const PriceProfile& prices,
                                            const ContentParams& params, Start start,
                                            const BestResponseOptions& opt = {});

/// Exhaustive price lattice at the given step with FromFull best responses.
StrategySolution grid_search_optimal(const PopulationGrid& pop, Strategy strategy,
                                     const ConnectivityParams& params, double price_step);
StrategySolution grid_search_optimal(const PopulationGrid& pop, Strategy strategy,
                                     const ContentParams& params, double price_step);

}  // namespace netprice::oracle
