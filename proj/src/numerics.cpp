#include "netprice/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "netprice/error.hpp"

namespace netprice {

double find_root_bracketed(const RealFn& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb)) {
        std::ostringstream msg;
        msg << "no sign change on [" << lo << ", " << hi << "]: f(lo)=" << fa << ", f(hi)=" << fb;
        throw Error(ErrorCode::NoBracket, msg.str());
    }
    double best = std::abs(fa) < std::abs(fb) ? a : b;
    double fbest = std::min(std::abs(fa), std::abs(fb));
    int side = 0;  // Illinois bookkeeping
    for (int iter = 0; iter < 300; ++iter) {
        // regula falsi step, falling back to the midpoint when it stalls
        double x = (a * fb - b * fa) / (fb - fa);
        const double width = b - a;
        if (!(x > a + 0.01 * width && x < b - 0.01 * width)) x = 0.5 * (a + b);
        const double fx = f(x);
        if (std::abs(fx) < fbest) {
            fbest = std::abs(fx);
            best = x;
        }
        if (fbest <= tol) break;
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = x;
            fb = fx;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a))) break;
    }
    return best;
}

std::vector<double> scan_roots(const RealFn& residual, double lo, double hi, int grid_n) {
    grid_n = std::max(grid_n, 1);
    std::vector<double> roots;
    const double step = (hi - lo) / grid_n;
    auto node = [&](int i) { return i == grid_n ? hi : lo + step * i; };
    double x_prev = node(0);
    double r_prev = residual(x_prev);
    if (r_prev == 0.0) roots.push_back(x_prev);
    for (int i = 1; i <= grid_n; ++i) {
        const double x = node(i);
        const double r = residual(x);
        if (r == 0.0) {
            roots.push_back(x);
        } else if (r_prev != 0.0 && !std::isnan(r) && !std::isnan(r_prev) &&
                   std::signbit(r) != std::signbit(r_prev)) {
            roots.push_back(find_root_bracketed(residual, x_prev, x));
        }
        x_prev = x;
        r_prev = r;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

FixedPointResult scan_fixed_points(const RealFn& g, double lo, double hi, int grid_n) {
    FixedPointResult out;
    auto h = [&](double x) { return x - g(x); };
    out.all_roots = scan_roots(h, lo, hi, grid_n);
    out.iterations = grid_n + 1;
    if (!out.all_roots.empty()) {
        out.value = out.all_roots.back();
        double worst = 0.0;
        for (double r : out.all_roots) worst = std::max(worst, std::abs(h(r)));
        out.residual = worst;
        return out;
    }
    // no crossing: decide the escape direction from the midpoint sign
    const double mid = h(0.5 * (lo + hi));
    out.value = mid < 0.0 ? hi : lo;
    out.residual = std::abs(h(out.value));
    return out;
}

std::optional<double> first_crossing_from_top(const RealFn& residual, double lo, double hi,
                                              int grid_n, double tol) {
    grid_n = std::max(grid_n, 1);
    double x_prev = hi;
    double r_prev = residual(hi);
    if (r_prev == 0.0) return hi;
    const double step = (hi - lo) / grid_n;
    for (int i = grid_n - 1; i >= 0; --i) {
        const double x = i == 0 ? lo : lo + step * i;
        const double r = residual(x);
        if (r == 0.0) return x;
        if (!std::isnan(r) && !std::isnan(r_prev) && std::signbit(r) != std::signbit(r_prev)) {
            return find_root_bracketed(residual, x, x_prev, tol);
        }
        x_prev = x;
        r_prev = r;
    }
    return std::nullopt;
}

double largest_fixed_point_monotone(const RealFn& g, double lo, double hi, int grid_n,
                                    double tol) {
    auto h = [&](double x) { return x - g(x); };
    return first_crossing_from_top(h, lo, hi, grid_n, tol).value_or(lo);
}

double largest_fixed_point_iterated(const RealFn& g, double lo, double hi, int grid_n,
                                    int max_iter, double tol) {
    double d = hi;
    for (int i = 0; i < max_iter; ++i) {
        const double next = std::clamp(g(d), lo, hi);
        if (std::abs(next - d) <= tol) return next;
        d = next;
    }
    auto h = [&](double x) { return x - g(x); };
    return first_crossing_from_top(h, lo, d, grid_n).value_or(lo);
}

std::vector<double> quadratic_roots(double a, double b, double c) {
    std::vector<double> roots;
    if (a == 0.0) {
        if (b != 0.0) roots.push_back(-c / b);
        return roots;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(sq, b));
    if (q == 0.0) {
        roots.push_back(0.0);
        return roots;
    }
    roots.push_back(q / a);
    roots.push_back(c / q);
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double sum = f(c - dx) + f(c + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double integrate_1d(const RealFn& f, double a, double b, double tol, int max_subdivisions) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int splits = 0;
    while (error > tol) {
        if (splits >= max_subdivisions) {
            std::ostringstream msg;
            msg << "quadrature error estimate " << error << " above tolerance " << tol;
            throw Error(ErrorCode::ToleranceNotMet, msg.str());
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
        if (worst.b - worst.a < 1e-14 * (b - a)) {
            // interval collapsed around a discontinuity; accept what we have
            if (error <= 1e3 * tol) break;
        }
    }
    return sign * total;
}

}  // namespace netprice
