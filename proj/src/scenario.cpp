#include "netprice/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "netprice/error.hpp"

namespace netprice::scenario {

namespace {

const std::set<std::string> kSections{"model", "params", "sweep", "oracle"};

const std::set<std::string> kConnectivityKeys{"c1", "c2", "gamma", "alpha", "alpha_mean",
                                              "alpha_stddev"};
const std::set<std::string> kContentKeys{"c1", "c2", "lambda", "theta_bar", "omega", "gamma",
                                         "r1", "r1_mean", "r1_stddev", "r2", "r2_mean",
                                         "r2_stddev"};
const std::set<std::string> kSweepKeys{"x", "x_lo", "x_hi", "x_n", "y",
                                       "y_lo", "y_hi", "y_n", "strategies"};
const std::set<std::string> kOracleKeys{"n_users", "price_step"};

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw Error(ErrorCode::Parse, origin + ": " + message);
}

std::string_view trim(std::string_view s) {
    const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && space(s.front())) s.remove_prefix(1);
    while (!s.empty() && space(s.back())) s.remove_suffix(1);
    return s;
}

bool identifier(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::string lower(std::string_view s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::string location(std::string_view name, int line, std::size_t column) {
    std::ostringstream out;
    out << name << ':' << line << ':' << column;
    return out.str();
}

int parse_count(const Entry& e) {
    const double v = parse_number(e.value, e.origin);
    if (v != std::floor(v) || v < 0.0 || v > 1e9) fail(e.origin, "'" + e.key + "' must be a whole number");
    return static_cast<int>(v);
}

DistKind parse_kind(const Entry& e) {
    const std::string v = lower(e.value);
    if (v == "uniform") return DistKind::Uniform;
    if (v == "truncated_normal" || v == "normal") return DistKind::TruncatedNormal;
    fail(e.origin, "'" + e.key + "' must be uniform or truncated_normal, got '" + e.value + "'");
}

// Last assignment of every key in a section.
std::map<std::string, const Entry*> latest(const std::vector<Entry>& entries, const std::string& section,
                                           const std::set<std::string>& allowed, const char* what) {
    std::map<std::string, const Entry*> out;
    for (const Entry& e : entries) {
        if (e.section != section) continue;
        if (!allowed.count(e.key)) fail(e.origin, "unknown " + std::string(what) + " key '" + e.key + "'");
        out[e.key] = &e;
    }
    return out;
}

// Applies kind, mean and stddev; a normal law without an explicit mean or
// stddev takes the support midpoint and a fifth of the width.
void apply_law(DistributionSpec& d, const std::map<std::string, const Entry*>& kv,
               const std::string& prefix) {
    if (auto it = kv.find(prefix); it != kv.end()) d.kind = parse_kind(*it->second);
    d.mean = 0.5 * (d.lo + d.hi);
    d.stddev = 0.2 * (d.hi - d.lo);
    if (auto it = kv.find(prefix + "_mean"); it != kv.end()) {
        d.mean = parse_number(it->second->value, it->second->origin);
    }
    if (auto it = kv.find(prefix + "_stddev"); it != kv.end()) {
        d.stddev = parse_number(it->second->value, it->second->origin);
    }
}

}  // namespace

double parse_number(std::string_view text, const std::string& origin) {
    const std::string_view t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        fail(origin, "expected a decimal number, got '" + std::string(t) + "'");
    }
    return v;
}

std::vector<Entry> parse(std::string_view text, std::string_view name) {
    std::vector<Entry> entries;
    std::set<std::pair<std::string, std::string>> seen;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view raw = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        const std::string_view line = trim(raw);
        const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data()) + 1;
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            if (end == text.size()) break;
            continue;
        }
        const std::string here = location(name, line_no, indent);
        if (line.front() == '[') {
            if (line.back() != ']') fail(here, "section header is missing ']'");
            const std::string_view inner = trim(line.substr(1, line.size() - 2));
            const std::string s = lower(inner);
            if (!kSections.count(s)) fail(here, "unknown section '" + std::string(inner) + "'");
            section = s;
        } else {
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos) fail(here, "expected 'key = value'");
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = trim(line.substr(eq + 1));
            if (section.empty()) fail(here, "assignment before any [section]");
            if (!identifier(key)) fail(here, "invalid key '" + std::string(key) + "'");
            if (value.empty()) fail(here, "missing value for '" + std::string(key) + "'");
            if (!seen.insert({section, std::string(key)}).second) {
                fail(here, "repeated key '" + std::string(key) + "' in [" + section + "]");
            }
            entries.push_back({section, std::string(key), std::string(value), here});
        }
        if (end == text.size()) break;
    }
    return entries;
}

std::vector<Entry> load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

Scenario interpret(const std::vector<Entry>& entries) {
    Scenario sc;
    for (const Entry& e : entries) {
        if (e.section != "model") continue;
        if (e.key != "type") fail(e.origin, "unknown model key '" + e.key + "'");
        const auto m = parse_model(e.value);
        if (!m) fail(e.origin, "model must be connectivity or content, got '" + e.value + "'");
        sc.model = *m;
    }
    const bool content = sc.model == Model::Content;
    const auto params = latest(entries, "params", content ? kContentKeys : kConnectivityKeys,
                               content ? "content parameter" : "connectivity parameter");
    auto number = [&](const std::map<std::string, const Entry*>& kv, const std::string& key,
                      double& target) {
        if (auto it = kv.find(key); it != kv.end()) {
            target = parse_number(it->second->value, it->second->origin);
        }
    };

    if (content) {
        ContentParams& p = sc.content;
        number(params, "c1", p.c1);
        number(params, "c2", p.c2);
        number(params, "lambda", p.lambda);
        number(params, "omega", p.omega);
        number(params, "gamma", p.gamma);
        double theta = p.theta_bar;
        number(params, "theta_bar", theta);
        p.set_theta_bar(theta);
        apply_law(p.r1, params, "r1");
        apply_law(p.r2, params, "r2");
    } else {
        ConnectivityParams& p = sc.connectivity;
        number(params, "c1", p.c1);
        number(params, "c2", p.c2);
        number(params, "gamma", p.gamma);
        apply_law(p.alpha, params, "alpha");
    }

    const auto sweep = latest(entries, "sweep", kSweepKeys, "sweep");
    sc.has_sweep = !sweep.empty();
    regime::SweepSpec& s = sc.sweep;
    s.model = sc.model;
    s.connectivity = sc.connectivity;
    s.content = sc.content;
    if (auto it = sweep.find("x"); it != sweep.end()) s.x.param = it->second->value;
    if (auto it = sweep.find("y"); it != sweep.end()) s.y.param = it->second->value;
    number(sweep, "x_lo", s.x.lo);
    number(sweep, "x_hi", s.x.hi);
    number(sweep, "y_lo", s.y.lo);
    number(sweep, "y_hi", s.y.hi);
    if (auto it = sweep.find("x_n"); it != sweep.end()) s.x.n = parse_count(*it->second);
    if (auto it = sweep.find("y_n"); it != sweep.end()) s.y.n = parse_count(*it->second);
    if (auto it = sweep.find("strategies"); it != sweep.end()) {
        s.strategies.clear();
        std::string_view rest = it->second->value;
        while (true) {
            const std::size_t comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            const auto st = parse_strategy(item);
            if (!st || *st == Strategy::DeviceOnly) {
                fail(it->second->origin, "unknown strategy '" + std::string(item) + "'");
            }
            s.strategies.push_back(*st);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }

    const auto oracle = latest(entries, "oracle", kOracleKeys, "oracle");
    if (auto it = oracle.find("n_users"); it != oracle.end()) sc.n_users = parse_count(*it->second);
    number(oracle, "price_step", sc.price_step);
    return sc;
}

}  // namespace netprice::scenario
