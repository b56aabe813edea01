#include "netprice/regime.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netprice/error.hpp"

namespace netprice::regime {

namespace {

[[noreturn]] void bad_param(Model model, const std::string& name) {
    std::ostringstream msg;
    msg << "unknown " << to_string(model) << " sweep parameter '" << name << "'";
    throw Error(ErrorCode::Validation, msg.str());
}

bool has(const std::vector<Strategy>& set, Strategy s) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

// Profit a strategy brings to the comparison: an unsold bundle counts as zero,
// a hybrid that collapsed to device-only sales keeps its profit.
double contribution(const StrategySolution& s) {
    if (s.service_offered || s.strategy == Strategy::DeviceOnly) return s.profit;
    return 0.0;
}

// Winner among a strategy subset with the pairwise tie order of the full
// comparison: bundled over hybrid, hybrid over separate, separate over bundled.
Strategy choose(const Comparison& c) {
    double best = -1e300;
    for (const auto* s : {&c.separate, &c.bundled, &c.hybrid}) {
        if (*s) best = std::max(best, contribution(**s));
    }
    auto ties = [&](const std::optional<StrategySolution>& s) {
        return s && contribution(*s) >= best - kTieTol;
    };
    const bool sep = ties(c.separate);
    const bool bun = ties(c.bundled);
    bool hyb = ties(c.hybrid);
    if (bun && hyb) hyb = false;
    if (sep && hyb && c.hybrid->strategy == Strategy::DeviceOnly) hyb = false;
    if (hyb) return Strategy::Hybrid;
    if (sep) return Strategy::Separate;
    return Strategy::Bundled;
}

}  // namespace

double SweepAxis::at(int i) const noexcept {
    if (n <= 1) return lo;
    if (i == n - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void set_param(ConnectivityParams& p, const std::string& name, double v) {
    if (name == "c1") p.c1 = v;
    else if (name == "c2") p.c2 = v;
    else if (name == "gamma") p.gamma = v;
    else if (name == "alpha_mean") p.alpha.mean = v;
    else if (name == "alpha_stddev") p.alpha.stddev = v;
    else bad_param(Model::Connectivity, name);
}

void set_param(ContentParams& p, const std::string& name, double v) {
    if (name == "c1") p.c1 = v;
    else if (name == "c2") p.c2 = v;
    else if (name == "lambda") p.lambda = v;
    else if (name == "theta_bar") p.set_theta_bar(v);
    else if (name == "omega") p.omega = v;
    else if (name == "gamma") p.gamma = v;
    else if (name == "r1_mean") p.r1.mean = v;
    else if (name == "r1_stddev") p.r1.stddev = v;
    else if (name == "r2_mean") p.r2.mean = v;
    else if (name == "r2_stddev") p.r2.stddev = v;
    else bad_param(Model::Content, name);
}

void validate_sweep(const SweepSpec& spec) {
    for (const SweepAxis* axis : {&spec.x, &spec.y}) {
        const char* which = axis == &spec.x ? "x" : "y";
        std::ostringstream msg;
        if (axis->n < 2) {
            msg << "sweep." << which << ".n=" << axis->n << " must be at least 2";
        } else if (!(axis->lo < axis->hi)) {
            msg << "sweep." << which << " requires lo < hi";
        }
        if (!msg.str().empty()) throw Error(ErrorCode::Validation, msg.str());
        if (spec.model == Model::Connectivity) {
            ConnectivityParams probe = spec.connectivity;
            set_param(probe, axis->param, axis->lo);
        } else {
            ContentParams probe = spec.content;
            set_param(probe, axis->param, axis->lo);
        }
    }
    if (spec.x.param == spec.y.param) {
        throw Error(ErrorCode::Validation, "sweep axes must name different parameters");
    }
    if (spec.strategies.empty()) {
        throw Error(ErrorCode::Validation, "sweep needs at least one strategy");
    }
    if (spec.model == Model::Connectivity) {
        require_valid(spec.connectivity);
    } else {
        require_valid(spec.content);
    }
}

RegimeMap sweep(const SweepSpec& spec) {
    validate_sweep(spec);
    RegimeMap map;
    map.spec = spec;
    const int nx = spec.x.n, ny = spec.y.n;
    map.cells.resize(static_cast<std::size_t>(nx) * ny);
    const bool content = spec.model == Model::Content;
    const bool want_sep = !content && has(spec.strategies, Strategy::Separate);
    const bool want_bun = has(spec.strategies, Strategy::Bundled);
    const bool want_hyb = has(spec.strategies, Strategy::Hybrid);
    const bool full = (content || want_sep) && want_bun && want_hyb;
    // bit mask of the analytic regions each cell falls in; -1 when unknown
    std::vector<int> side(map.cells.size(), -1);

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nx * ny; ++k) {
        Cell& cell = map.cells[static_cast<std::size_t>(k)];
        cell.x = spec.x.at(k / ny);
        cell.y = spec.y.at(k % ny);
        try {
            Comparison cmp;
            if (content) {
                ContentParams p = spec.content;
                set_param(p, spec.x.param, cell.x);
                set_param(p, spec.y.param, cell.y);
                cmp = content::compare_content(p, spec.content_options);
                if (cmp.degeneration_condition) side[k] = *cmp.degeneration_condition ? 1 : 0;
            } else {
                ConnectivityParams p = spec.connectivity;
                set_param(p, spec.x.param, cell.x);
                set_param(p, spec.y.param, cell.y);
                cmp = connectivity::compare_connectivity(p, spec.connectivity_options);
                side[k] = (p.c1 + p.c2 <= 1.0 ? 1 : 0) | (p.c2 < *cmp.bundled_threshold ? 2 : 0);
            }
            if (!want_sep) cmp.separate.reset();
            if (!want_bun) cmp.bundled.reset();
            if (!want_hyb) cmp.hybrid.reset();
            if (!full) cmp.winner = choose(cmp);
            if (cmp.separate) cell.profit_separate = contribution(*cmp.separate);
            if (cmp.bundled) cell.profit_bundled = contribution(*cmp.bundled);
            if (cmp.hybrid) cell.profit_hybrid = contribution(*cmp.hybrid);
            cell.winner = cmp.winner;
            cell.winner_label = std::string(cmp.winner_label());
            cell.bundled_threshold = cmp.bundled_threshold;
            cell.total_cost = cmp.total_cost;
            cell.degeneration_condition = cmp.degeneration_condition;
        } catch (const std::exception& e) {
            cell.diagnostic = e.what();
            side[k] = -1;
        }
    }

    // a boundary passes between a cell and a neighbour on a different side
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            const std::size_t k = static_cast<std::size_t>(ix) * ny + iy;
            if (side[k] < 0) continue;
            auto differs = [&](int jx, int jy) {
                if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) return false;
                const int other = side[static_cast<std::size_t>(jx) * ny + jy];
                return other >= 0 && other != side[k];
            };
            map.cells[k].on_analytic_boundary =
                differs(ix - 1, iy) || differs(ix + 1, iy) || differs(ix, iy - 1) || differs(ix, iy + 1);
        }
    }
    return map;
}

std::size_t emit_csv(const RegimeMap& map, std::ostream& out) {
    std::string text;
    auto law = [&](const char* name, const DistributionSpec& d) {
        if (d.is_uniform()) return;
        text += std::string(" ") + name + "=truncated_normal(lo=" + fmt(d.lo) + ",hi=" + fmt(d.hi) +
                ",mean=" + fmt(d.mean) + ",stddev=" + fmt(d.stddev) + ")";
    };
    if (map.spec.model == Model::Connectivity) {
        law("alpha", map.spec.connectivity.alpha);
    } else {
        law("r1", map.spec.content.r1);
        law("r2", map.spec.content.r2);
    }
    if (!text.empty()) text = "#" + text + "\n";
    text += "x,y,profit_separate,profit_bundled,profit_hybrid,winner,on_analytic_boundary\n";
    for (const Cell& c : map.cells) {
        text += fmt(c.x) + ',' + fmt(c.y) + ',' + fmt(c.profit_separate) + ',' +
                fmt(c.profit_bundled) + ',' + fmt(c.profit_hybrid) + ',' + c.winner_label + ',' +
                (c.on_analytic_boundary ? "true" : "false") + '\n';
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Sink, "failed to write CSV output");
    return text.size();
}

std::size_t emit_csv(const RegimeMap& map, const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::Sink, "cannot open '" + path + "' for writing");
    const std::size_t bytes = emit_csv(map, file);
    file.close();
    if (!file) throw Error(ErrorCode::Sink, "failed to close '" + path + "'");
    return bytes;
}

}  // namespace netprice::regime
