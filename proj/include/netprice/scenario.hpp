#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "netprice/params.hpp"
#include "netprice/regime.hpp"

namespace netprice::scenario {

/// One `key = value` assignment with its origin, e.g. "run.ini:4:1" or "--c1".
struct Entry {
    std::string section;
    std::string key;
    std::string value;
    std::string origin;
};

/// INI-style text: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Throws Error(Parse) with a "name:line:column: message" text for
/// malformed lines, unknown sections or repeated keys.
std::vector<Entry> parse(std::string_view text, std::string_view name = "<scenario>");

/// Reads and parses a file; throws Error(Parse) when it cannot be read.
std::vector<Entry> load(const std::string& path);

struct Scenario {
    Model model = Model::Connectivity;
    ConnectivityParams connectivity;
    ContentParams content;
    bool has_sweep = false;
    regime::SweepSpec sweep;
    int n_users = 0;            // 0: oracle default for the model
    double price_step = 1e-2;
};

/// Applies entries in order, later ones overriding earlier ones. Unknown keys
/// and malformed values throw Error(Parse) carrying the entry origin.
/// Sections: model (type), params, sweep (x, x_lo, x_hi, x_n, y, ..., strategies),
/// oracle (n_users, price_step).
Scenario interpret(const std::vector<Entry>& entries);

/// Strict decimal parse of a whole token.
double parse_number(std::string_view text, const std::string& origin);

}  // namespace netprice::scenario
