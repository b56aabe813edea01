#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netprice {

enum class DistKind { Uniform, TruncatedNormal };

/// Law of a bounded user attribute (mobility factor, device or service value).
/// Uniform ignores mean/stddev.
struct DistributionSpec {
    DistKind kind = DistKind::Uniform;
    double lo = 0.0;
    double hi = 1.0;
    double mean = 0.5;
    double stddev = 0.2;

    static DistributionSpec uniform(double lo, double hi) {
        return {DistKind::Uniform, lo, hi, 0.5 * (lo + hi), 0.2 * (hi - lo)};
    }
    static DistributionSpec truncated_normal(double lo, double hi, double mean, double stddev) {
        return {DistKind::TruncatedNormal, lo, hi, mean, stddev};
    }
    bool is_uniform() const noexcept { return kind == DistKind::Uniform; }
};

/// Physical connectivity sharing: device value 1-a, service value a*D^gamma.
struct ConnectivityParams {
    double c1 = 0.0;
    double c2 = 0.0;
    double gamma = 1.0;
    DistributionSpec alpha = DistributionSpec::uniform(0.0, 1.0);

    bool closed_form() const noexcept { return alpha.is_uniform() && gamma == 1.0; }
};

/// Virtual content sharing: device value R1 on [0, theta_bar], service value
/// R2 + lambda*D^gamma with R2 on [0, 1]; bundle value scaled by omega.
struct ContentParams {
    double c1 = 0.0;
    double c2 = 0.0;
    double lambda = 0.0;
    double theta_bar = 1.5;
    double omega = 1.0;
    double gamma = 1.0;
    DistributionSpec r1 = DistributionSpec::uniform(0.0, 1.5);
    DistributionSpec r2 = DistributionSpec::uniform(0.0, 1.0);

    /// Uniform laws on the model supports for the given ceiling.
    static ContentParams uniform(double theta_bar, double lambda, double c1, double c2,
                                 double omega = 1.0);

    /// Re-anchors r1's support to [0, theta_bar], keeping its kind.
    void set_theta_bar(double value);

    bool uniform_valuations() const noexcept { return r1.is_uniform() && r2.is_uniform(); }
    bool closed_form() const noexcept { return uniform_valuations() && gamma == 1.0; }
};

struct PriceProfile {
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<double> p12;
};

enum class Strategy { Separate, Bundled, Hybrid, DeviceOnly };

enum class Model { Connectivity, Content };

std::string_view to_string(Model m) noexcept;
std::optional<Model> parse_model(std::string_view text);

std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view text);

/// Root structure of the separate-pricing first-order condition.
struct CubicDiagnostics {
    double mu = 0.0;
    double kappa = 0.0;
    int root_count_in_feasible = 0;
};

/// Stage-II demands. d_s is the population feeding the externality.
struct DemandEquilibrium {
    double d1 = 0.0;
    double d2 = 0.0;
    double d12 = 0.0;
    double d_s = 0.0;
    double residual = 0.0;
};

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const DistributionSpec& spec, std::string_view field);
ValidationReport validate(const ConnectivityParams& params);
ValidationReport validate(const ContentParams& params);

/// Throws Error(Validation) carrying the report summary.
void require_valid(const ConnectivityParams& params);
void require_valid(const ContentParams& params);

}  // namespace netprice
