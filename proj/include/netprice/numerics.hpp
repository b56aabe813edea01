#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace netprice {

using RealFn = std::function<double(double)>;

inline constexpr double kRootTol = 1e-10;
inline constexpr double kQuadTol = 1e-8;
inline constexpr int kScanGrid = 10000;

/// Bracketed root by bisection with secant acceleration. Returns the point
/// with the smallest |f| seen; that is within tol unless f jumps across the
/// bracket. Throws Error(NoBracket) when f(lo) and f(hi) share a sign.
double find_root_bracketed(const RealFn& f, double lo, double hi, double tol = kRootTol);

struct FixedPointResult {
    double value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> all_roots;  // ascending
};

/// Every zero of `residual` on [lo, hi] found by a uniform sign-change scan:
/// exact zeros at grid nodes plus one refined root per bracketing cell.
std::vector<double> scan_roots(const RealFn& residual, double lo, double hi, int grid_n);

/// Fixed points of g on [lo, hi]. value is the largest root; with no root the
/// iteration escapes to hi when x < g(x) throughout, else collapses to lo.
FixedPointResult scan_fixed_points(const RealFn& g, double lo, double hi, int grid_n = kScanGrid);

/// Walks down from hi over grid_n cells and returns the first zero met: hi
/// itself when the residual vanishes there, otherwise the refined root of the
/// highest bracketing cell. nullopt when the residual never changes sign.
std::optional<double> first_crossing_from_top(const RealFn& residual, double lo, double hi,
                                              int grid_n, double tol = kRootTol);

/// Largest fixed point of a nondecreasing map g: [lo, hi] -> [lo, hi].
/// x - g(x) is >= 0 at hi and <= 0 at lo, so a crossing always exists.
double largest_fixed_point_monotone(const RealFn& g, double lo, double hi, int grid_n,
                                    double tol = kRootTol);

/// Largest fixed point of a nondecreasing map g on [lo, hi] by iterating
/// from hi, which descends monotonically onto it. When the iteration stalls
/// (slope near 1) the remaining interval is scanned top-down.
double largest_fixed_point_iterated(const RealFn& g, double lo, double hi, int grid_n,
                                    int max_iter = 400, double tol = 1e-14);

/// Real roots of a*x^2 + b*x + c (a may be 0), ascending.
std::vector<double> quadratic_roots(double a, double b, double c);

/// Adaptive Gauss-Kronrod (7,15). Throws Error(ToleranceNotMet) when the
/// subdivision budget runs out before the error estimate drops below tol.
double integrate_1d(const RealFn& f, double a, double b, double tol = kQuadTol,
                    int max_subdivisions = 2000);

}  // namespace netprice
