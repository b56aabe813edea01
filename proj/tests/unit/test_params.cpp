#include <doctest.h>

#include "netprice/connectivity.hpp"
#include "netprice/content.hpp"
#include "netprice/error.hpp"
#include "netprice/params.hpp"

using namespace netprice;

namespace {

bool has_field(const ValidationReport& r, const std::string& field) {
    for (const auto& v : r.violations) {
        if (v.field == field) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("valid connectivity parameters pass") {
    ConnectivityParams p{0.3, 0.2, 1.0, DistributionSpec::uniform(0.0, 1.0)};
    const ValidationReport r = validate(p);
    CHECK(r.ok());
    CHECK(r.summary() == "ok");
}

TEST_CASE("device cost above one is reported under c1") {
    ConnectivityParams p;
    p.c1 = 1.2;
    const ValidationReport r = validate(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_field(r, "c1"));
    CHECK(r.summary().find("c1") != std::string::npos);
}

TEST_CASE("device value ceiling below one is rejected") {
    ContentParams p = ContentParams::uniform(1.5, 0.2, 0.2, 0.2);
    p.set_theta_bar(0.8);
    const ValidationReport r = validate(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_field(r, "theta_bar"));
}

TEST_CASE("every bound of the connectivity container is checked") {
    ConnectivityParams p;
    p.c2 = -0.1;
    CHECK(has_field(validate(p), "c2"));
    p = {};
    p.gamma = 0.0;
    CHECK(has_field(validate(p), "gamma"));
    p.gamma = 1.5;
    CHECK(has_field(validate(p), "gamma"));
    p = {};
    p.alpha = DistributionSpec::truncated_normal(0.0, 1.0, 1.2, 0.2);
    CHECK(has_field(validate(p), "alpha.mean"));
    p.alpha = DistributionSpec::truncated_normal(0.0, 1.0, 0.5, 0.0);
    CHECK(has_field(validate(p), "alpha.stddev"));
    p.alpha = DistributionSpec::uniform(0.0, 2.0);
    CHECK(has_field(validate(p), "alpha"));
}

TEST_CASE("content costs may exceed one up to the maximal bundle valuation") {
    ContentParams p = ContentParams::uniform(1.5, 0.2, 1.2, 1.2);
    CHECK(validate(p).ok());
    p.c1 = 2.6;
    CHECK(has_field(validate(p), "c1"));
    p = ContentParams::uniform(1.5, 0.2, 0.1, 0.1);
    p.omega = 0.0;
    CHECK(has_field(validate(p), "omega"));
    p.omega = 1.0;
    p.lambda = -1.0;
    CHECK(has_field(validate(p), "lambda"));
    p.lambda = 0.2;
    p.r1.hi = 2.0;
    CHECK(has_field(validate(p), "r1"));
}

TEST_CASE("validation is idempotent and leaves its input untouched") {
    ConnectivityParams p{1.3, -0.2, 2.0, DistributionSpec::uniform(0.0, 1.0)};
    const ConnectivityParams copy = p;
    const ValidationReport a = validate(p);
    const ValidationReport b = validate(p);
    CHECK(a.summary() == b.summary());
    CHECK(a.violations.size() == 3);
    CHECK(p.c1 == copy.c1);
    CHECK(p.c2 == copy.c2);
    CHECK(p.gamma == copy.gamma);
}

TEST_CASE("solvers refuse parameters that fail validation") {
    ConnectivityParams bad;
    bad.c1 = 1.5;
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Usage;
    };
    CHECK(code_of([&] { connectivity::sep_optimal(bad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { connectivity::bundle_optimal(bad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { connectivity::hybrid_optimal(bad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { connectivity::compare_connectivity(bad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { connectivity::bundle_demand(0.9, bad); }) == ErrorCode::Validation);

    ContentParams cbad = ContentParams::uniform(1.5, 0.2, 0.2, 0.2);
    cbad.set_theta_bar(0.5);
    CHECK(code_of([&] { content::bundled_optimal_content(cbad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { content::hybrid_optimal_content(cbad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { content::compare_content(cbad); }) == ErrorCode::Validation);
}

TEST_CASE("strategy and model names parse case-insensitively") {
    CHECK(parse_strategy("Hybrid") == Strategy::Hybrid);
    CHECK(parse_strategy("BUNDLED") == Strategy::Bundled);
    CHECK(parse_strategy("separate") == Strategy::Separate);
    CHECK_FALSE(parse_strategy("mixed").has_value());
    CHECK(parse_model("Content") == Model::Content);
    CHECK(parse_model("CONNECTIVITY") == Model::Connectivity);
    CHECK_FALSE(parse_model("wifi").has_value());
    CHECK(to_string(Strategy::DeviceOnly) == "device_only");
}

TEST_CASE("defaults reproduce the baseline model") {
    const ContentParams p;
    CHECK(p.omega == 1.0);
    CHECK(p.gamma == 1.0);
    CHECK(p.closed_form());
    const ConnectivityParams c;
    CHECK(c.closed_form());
}
