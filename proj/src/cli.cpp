#include "netprice/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "netprice/connectivity.hpp"
#include "netprice/content.hpp"
#include "netprice/error.hpp"
#include "netprice/oracle.hpp"
#include "netprice/regime.hpp"
#include "netprice/scenario.hpp"

namespace netprice::cli {

namespace {

struct FlagSpec {
    const char* flag;
    const char* section;
    const char* key;
    const char* help;
};

constexpr FlagSpec kParamFlags[] = {
    {"--c1", "params", "c1", "unit device cost"},
    {"--c2", "params", "c2", "unit service cost"},
    {"--gamma", "params", "gamma", "quality exponent in (0,1]"},
    {"--lambda", "params", "lambda", "content: network externality degree"},
    {"--theta-bar", "params", "theta_bar", "content: device value ceiling (>= 1)"},
    {"--omega", "params", "omega", "content: bundle correlation factor"},
    {"--alpha", "params", "alpha", "connectivity: mobility law, uniform|truncated_normal"},
    {"--alpha-mean", "params", "alpha_mean", "connectivity: mobility mean"},
    {"--alpha-stddev", "params", "alpha_stddev", "connectivity: mobility stddev"},
    {"--r1", "params", "r1", "content: device value law"},
    {"--r1-mean", "params", "r1_mean", "content: device value mean"},
    {"--r1-stddev", "params", "r1_stddev", "content: device value stddev"},
    {"--r2", "params", "r2", "content: service value law"},
    {"--r2-mean", "params", "r2_mean", "content: service value mean"},
    {"--r2-stddev", "params", "r2_stddev", "content: service value stddev"},
};

constexpr FlagSpec kOracleFlags[] = {
    {"--n-users", "oracle", "n_users", "population size (content rounds to a square lattice)"},
    {"--price-step", "oracle", "price_step", "price lattice step, at most 0.01"},
};

constexpr const char* kPrecedence =
    "Values given as flags override the same keys read from --scenario; the scenario file "
    "overrides built-in defaults.";

struct Inputs {
    std::string model;
    std::string strategy;
    std::string scenario;
    std::string out;
    std::vector<std::pair<const FlagSpec*, std::unique_ptr<std::string>>> values;
    std::vector<std::pair<const FlagSpec*, CLI::Option*>> options;
};

template <std::size_t N>
void add_flags(CLI::App* cmd, Inputs& in, const FlagSpec (&specs)[N]) {
    for (const FlagSpec& f : specs) {
        auto& slot = in.values.emplace_back(&f, std::make_unique<std::string>());
        in.options.emplace_back(&f, cmd->add_option(f.flag, *slot.second, f.help));
    }
}

void add_common(CLI::App* cmd, Inputs& in) {
    cmd->add_option("--model", in.model, "connectivity | content (case-insensitive)");
    cmd->add_option("--scenario", in.scenario, "scenario file with [model] [params] [sweep] [oracle]");
    add_flags(cmd, in, kParamFlags);
    cmd->footer(kPrecedence);
}

scenario::Scenario resolve(const Inputs& in) {
    std::vector<scenario::Entry> entries;
    if (!in.scenario.empty()) entries = scenario::load(in.scenario);
    const bool file_model = std::any_of(entries.begin(), entries.end(),
                                        [](const scenario::Entry& e) { return e.section == "model"; });
    if (!in.model.empty()) {
        entries.push_back({"model", "type", in.model, "--model"});
    } else if (!file_model) {
        throw Error(ErrorCode::Usage, "--model is required (connectivity or content)");
    }
    for (std::size_t i = 0; i < in.values.size(); ++i) {
        const FlagSpec* f = in.values[i].first;
        if (in.options[i].second->count() == 0) continue;
        entries.push_back({f->section, f->key, *in.values[i].second, f->flag});
    }
    return scenario::interpret(entries);
}

Strategy strategy_of(const Inputs& in) {
    if (in.strategy.empty()) throw Error(ErrorCode::Usage, "--strategy is required");
    const auto s = parse_strategy(in.strategy);
    if (!s || *s == Strategy::DeviceOnly) {
        throw Error(ErrorCode::Usage,
                    "--strategy must be separate, bundled or hybrid, got '" + in.strategy + "'");
    }
    return *s;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

void print_solution(std::ostream& out, const std::string& prefix, const StrategySolution& s) {
    out << prefix << "strategy=" << to_string(s.strategy) << '\n';
    out << prefix << "offered=" << flag(s.service_offered) << '\n';
    if (s.prices.p1) out << prefix << "p1=" << num(*s.prices.p1) << '\n';
    if (s.prices.p2) out << prefix << "p2=" << num(*s.prices.p2) << '\n';
    if (s.prices.p12) out << prefix << "p12=" << num(*s.prices.p12) << '\n';
    out << prefix << "d1=" << num(s.demands.d1) << '\n';
    out << prefix << "d2=" << num(s.demands.d2) << '\n';
    out << prefix << "d12=" << num(s.demands.d12) << '\n';
    out << prefix << "d_s=" << num(s.demands.d_s) << '\n';
    out << prefix << "profit=" << num(s.profit) << '\n';
    if (s.regime) out << prefix << "regime=" << to_string(*s.regime) << '\n';
    if (s.diagnostics) {
        out << prefix << "mu=" << num(s.diagnostics->mu) << '\n';
        out << prefix << "kappa=" << num(s.diagnostics->kappa) << '\n';
        out << prefix << "feasible_roots=" << s.diagnostics->root_count_in_feasible << '\n';
    }
    if (s.strategy == Strategy::Hybrid || s.degenerate_to_bundle) {
        out << prefix << "degenerate_to_bundle=" << flag(s.degenerate_to_bundle) << '\n';
    }
}

StrategySolution analytic(const scenario::Scenario& sc, Strategy strategy) {
    if (sc.model == Model::Connectivity) {
        switch (strategy) {
            case Strategy::Separate: return connectivity::sep_optimal(sc.connectivity);
            case Strategy::Bundled: return connectivity::bundle_optimal(sc.connectivity);
            default: return connectivity::hybrid_optimal(sc.connectivity);
        }
    }
    switch (strategy) {
        case Strategy::Bundled: return content::bundled_optimal_content(sc.content);
        case Strategy::Hybrid: return content::hybrid_optimal_content(sc.content);
        default:
            throw Error(ErrorCode::Unsupported, "the content model has no separate pricing");
    }
}

void do_solve(const Inputs& in, std::ostream& out) {
    const scenario::Scenario sc = resolve(in);
    const Strategy strategy = strategy_of(in);
    const StrategySolution sol = analytic(sc, strategy);
    out << "model=" << to_string(sc.model) << '\n';
    print_solution(out, "", sol);
}

void do_compare(const Inputs& in, std::ostream& out) {
    const scenario::Scenario sc = resolve(in);
    const Comparison cmp = sc.model == Model::Connectivity
                               ? connectivity::compare_connectivity(sc.connectivity)
                               : content::compare_content(sc.content);
    out << "model=" << to_string(sc.model) << '\n';
    if (cmp.separate) print_solution(out, "separate.", *cmp.separate);
    if (cmp.bundled) print_solution(out, "bundled.", *cmp.bundled);
    if (cmp.hybrid) print_solution(out, "hybrid.", *cmp.hybrid);
    out << "winner=" << to_string(cmp.winner) << '\n';
    out << "winner_label=" << cmp.winner_label() << '\n';
    if (cmp.bundled_threshold) out << "bundled_threshold=" << num(*cmp.bundled_threshold) << '\n';
    if (cmp.total_cost) out << "total_cost=" << num(*cmp.total_cost) << '\n';
    if (sc.model == Model::Connectivity) {
        out << "small_service_cost=" << flag(cmp.small_service_cost) << '\n';
    }
    if (cmp.degeneration_condition) {
        out << "degeneration_condition=" << flag(*cmp.degeneration_condition) << '\n';
    }
}

void do_map(const Inputs& in, std::ostream& out) {
    if (in.scenario.empty()) throw Error(ErrorCode::Usage, "map needs --scenario");
    if (in.out.empty()) throw Error(ErrorCode::Usage, "map needs --out");
    const scenario::Scenario sc = resolve(in);
    const regime::RegimeMap map = regime::sweep(sc.sweep);
    const std::size_t bytes = regime::emit_csv(map, in.out);
    const auto failed = std::count_if(map.cells.begin(), map.cells.end(),
                                      [](const regime::Cell& c) { return !c.diagnostic.empty(); });
    out << "cells=" << map.cells.size() << '\n';
    out << "failed_cells=" << failed << '\n';
    out << "bytes=" << bytes << '\n';
    out << "out=" << in.out << '\n';
}

void do_oracle(const Inputs& in, std::ostream& out) {
    const scenario::Scenario sc = resolve(in);
    const Strategy strategy = strategy_of(in);
    const bool conn = sc.model == Model::Connectivity;
    const int n = sc.n_users > 0 ? sc.n_users : (conn ? 10000 : 1024);
    const oracle::PopulationGrid pop = conn ? oracle::build_population(sc.connectivity, n)
                                            : oracle::build_population(sc.content, n);
    const StrategySolution found =
        conn ? oracle::grid_search_optimal(pop, strategy, sc.connectivity, sc.price_step)
             : oracle::grid_search_optimal(pop, strategy, sc.content, sc.price_step);
    const StrategySolution ref = analytic(sc, strategy);
    out << "model=" << to_string(sc.model) << '\n';
    out << "n_users=" << pop.users.size() << '\n';
    out << "price_step=" << num(sc.price_step) << '\n';
    print_solution(out, "oracle.", found);
    print_solution(out, "analytic.", ref);
    out << "profit_deviation=" << num(found.profit - ref.profit) << '\n';
    double price_gap = 0.0;
    auto gap = [&](const std::optional<double>& a, const std::optional<double>& b) {
        if (a && b) price_gap = std::max(price_gap, std::abs(*a - *b));
    };
    gap(found.prices.p1, ref.prices.p1);
    gap(found.prices.p2, ref.prices.p2);
    gap(found.prices.p12, ref.prices.p12);
    out << "max_price_deviation=" << num(price_gap) << '\n';
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation:
        case ErrorCode::PriceOutOfRange:
        case ErrorCode::Parse:
        case ErrorCode::Usage:
            return 1;
        default:
            return 2;
    }
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Device and sharing-service pricing solver", "netprice"};
    app.require_subcommand(1);
    app.footer(kPrecedence);

    Inputs solve_in, compare_in, map_in, oracle_in;
    CLI::App* solve = app.add_subcommand("solve", "optimal menu for one strategy");
    add_common(solve, solve_in);
    solve->add_option("--strategy", solve_in.strategy, "separate | bundled | hybrid");

    CLI::App* compare = app.add_subcommand("compare", "all strategies, winner and analytic thresholds");
    add_common(compare, compare_in);

    CLI::App* map = app.add_subcommand("map", "regime sweep written as CSV");
    add_common(map, map_in);
    map->add_option("--out", map_in.out, "CSV destination");

    CLI::App* orc = app.add_subcommand("oracle", "brute-force population optimum vs the analytic solver");
    add_common(orc, oracle_in);
    orc->add_option("--strategy", oracle_in.strategy, "separate | bundled | hybrid");
    add_flags(orc, oracle_in, kOracleFlags);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const CLI::App* sub : {solve, compare, map, orc}) {
            if (sub->parsed()) target = sub;
        }
        out << target->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "netprice: " << one_line(e.what()) << '\n';
        return 1;
    }

    try {
        if (solve->parsed()) do_solve(solve_in, out);
        else if (compare->parsed()) do_compare(compare_in, out);
        else if (map->parsed()) do_map(map_in, out);
        else do_oracle(oracle_in, out);
    } catch (const Error& e) {
        err << "netprice: " << to_string(e.code()) << ": " << one_line(e.what()) << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "netprice: " << one_line(e.what()) << '\n';
        return 2;
    }
    return 0;
}

}  // namespace netprice::cli
