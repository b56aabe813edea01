#include "netprice/params.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "netprice/error.hpp"

namespace netprice {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Validation: return "ValidationError";
        case ErrorCode::PriceOutOfRange: return "PriceOutOfRange";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorCode::NoConsistentBranch: return "NoConsistentBranch";
        case ErrorCode::Unsupported: return "UnsupportedConfiguration";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::Sink: return "SinkError";
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::Usage: return "UsageError";
    }
    return "Error";
}

ContentParams ContentParams::uniform(double theta_bar, double lambda, double c1, double c2,
                                     double omega) {
    ContentParams p;
    p.c1 = c1;
    p.c2 = c2;
    p.lambda = lambda;
    p.omega = omega;
    p.set_theta_bar(theta_bar);
    return p;
}

void ContentParams::set_theta_bar(double value) {
    theta_bar = value;
    r1.lo = 0.0;
    r1.hi = value;
}

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::Separate: return "separate";
        case Strategy::Bundled: return "bundled";
        case Strategy::Hybrid: return "hybrid";
        case Strategy::DeviceOnly: return "device_only";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
    std::string lower;
    for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "separate") return Strategy::Separate;
    if (lower == "bundled" || lower == "bundle") return Strategy::Bundled;
    if (lower == "hybrid") return Strategy::Hybrid;
    if (lower == "device_only" || lower == "device-only") return Strategy::DeviceOnly;
    return std::nullopt;
}

std::string_view to_string(Model m) noexcept {
    return m == Model::Connectivity ? "connectivity" : "content";
}

std::optional<Model> parse_model(std::string_view text) {
    std::string lower;
    for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "connectivity") return Model::Connectivity;
    if (lower == "content") return Model::Content;
    return std::nullopt;
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i].field << ": " << violations[i].message;
    }
    return out.str();
}

namespace {

void add(ValidationReport& report, std::string_view field, std::string message) {
    report.violations.push_back({std::string(field), std::move(message)});
}

void merge(ValidationReport& into, const ValidationReport& from) {
    into.violations.insert(into.violations.end(), from.violations.begin(), from.violations.end());
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ValidationReport validate(const DistributionSpec& spec, std::string_view field) {
    ValidationReport report;
    const std::string f(field);
    if (!finite(spec.lo) || !finite(spec.hi) || !(spec.lo < spec.hi)) {
        add(report, f, "support requires lo < hi");
    }
    if (spec.kind == DistKind::TruncatedNormal) {
        if (!finite(spec.stddev) || !(spec.stddev > 0.0)) add(report, f + ".stddev", "stddev must be > 0");
        if (!finite(spec.mean) || !(spec.lo < spec.mean && spec.mean < spec.hi)) {
            add(report, f + ".mean", "mean must lie strictly inside (lo, hi)");
        }
    }
    return report;
}

ValidationReport validate(const ConnectivityParams& p) {
    ValidationReport report;
    if (!finite(p.c1) || p.c1 < 0.0 || p.c1 > 1.0) add(report, "c1", "c1 not in [0,1]");
    if (!finite(p.c2) || p.c2 < 0.0 || p.c2 > 1.0) add(report, "c2", "c2 not in [0,1]");
    if (!finite(p.gamma) || !(p.gamma > 0.0) || p.gamma > 1.0) add(report, "gamma", "gamma not in (0,1]");
    merge(report, validate(p.alpha, "alpha"));
    if (p.alpha.lo != 0.0 || p.alpha.hi != 1.0) add(report, "alpha", "support must be [0,1]");
    return report;
}

ValidationReport validate(const ContentParams& p) {
    ValidationReport report;
    if (!finite(p.theta_bar) || p.theta_bar < 1.0) add(report, "theta_bar", "theta_bar < 1");
    const double cost_cap = p.theta_bar + 1.0;
    if (!finite(p.c1) || p.c1 < 0.0 || p.c1 > cost_cap) add(report, "c1", "c1 not in [0, theta_bar+1]");
    if (!finite(p.c2) || p.c2 < 0.0 || p.c2 > cost_cap) add(report, "c2", "c2 not in [0, theta_bar+1]");
    if (!finite(p.lambda) || p.lambda < 0.0) add(report, "lambda", "lambda < 0");
    if (!finite(p.omega) || !(p.omega > 0.0)) add(report, "omega", "omega must be > 0");
    if (!finite(p.gamma) || !(p.gamma > 0.0) || p.gamma > 1.0) add(report, "gamma", "gamma not in (0,1]");
    merge(report, validate(p.r1, "r1"));
    merge(report, validate(p.r2, "r2"));
    if (p.r1.lo != 0.0 || p.r1.hi != p.theta_bar) add(report, "r1", "support must be [0, theta_bar]");
    if (p.r2.lo != 0.0 || p.r2.hi != 1.0) add(report, "r2", "support must be [0,1]");
    return report;
}

void require_valid(const ConnectivityParams& params) {
    auto report = validate(params);
    if (!report.ok()) throw Error(ErrorCode::Validation, report.summary());
}

void require_valid(const ContentParams& params) {
    auto report = validate(params);
    if (!report.ok()) throw Error(ErrorCode::Validation, report.summary());
}

}  // namespace netprice
