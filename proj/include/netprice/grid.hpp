#pragma once

// Exhaustive lattice argmax kernels. The OpenMP versions split the outer index
// across threads and merge per-thread winners with the same strict order the
// serial reference uses, so both return bit-identical results.

#include <algorithm>
#include <cmath>
#include <limits>

namespace netprice::grid {

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double at(int i) const noexcept {
        if (n <= 1) return lo;
        if (i == n - 1) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    double step() const noexcept { return n <= 1 ? 0.0 : (hi - lo) / static_cast<double>(n - 1); }

    /// Axis over [center - step, center + step] clipped to this axis.
    Axis around(double center, int points) const noexcept {
        const double s = step();
        return {std::max(lo, center - s), std::min(hi, center + s), points};
    }

    static Axis with_step(double lo, double hi, double step) {
        const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
        return {lo, hi, std::max(n, 2)};
    }
};

struct Best {
    double value = -std::numeric_limits<double>::infinity();
    double x = 0.0;
    double y = 0.0;
    bool found = false;
};

/// Strict order: higher value wins, equal values go to the lexicographically
/// smaller (x, y).
inline bool better(const Best& a, const Best& b) noexcept {
    if (!a.found) return false;
    if (!b.found) return true;
    if (a.value != b.value) return a.value > b.value;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

inline void offer(Best& best, double value, double x, double y) noexcept {
    if (std::isnan(value)) return;
    Best candidate{value, x, y, true};
    if (better(candidate, best)) best = candidate;
}

// f(x) -> double, NaN marks an infeasible point.
template <class F>
Best argmax_1d_serial(const Axis& ax, F&& f) {
    Best best;
    for (int i = 0; i < ax.n; ++i) {
        const double x = ax.at(i);
        offer(best, f(x), x, 0.0);
    }
    return best;
}

template <class F>
Best argmax_1d(const Axis& ax, F&& f) {
    Best best;
#pragma omp parallel
    {
        Best local;
#pragma omp for schedule(static) nowait
        for (int i = 0; i < ax.n; ++i) {
            const double x = ax.at(i);
            offer(local, f(x), x, 0.0);
        }
#pragma omp critical(netprice_argmax_1d)
        {
            if (better(local, best)) best = local;
        }
    }
    return best;
}

// f(x, y) -> double, NaN marks an infeasible point.
template <class F>
Best argmax_2d_serial(const Axis& ax, const Axis& ay, F&& f) {
    Best best;
    for (int i = 0; i < ax.n; ++i) {
        const double x = ax.at(i);
        for (int j = 0; j < ay.n; ++j) {
            const double y = ay.at(j);
            offer(best, f(x, y), x, y);
        }
    }
    return best;
}

template <class F>
Best argmax_2d(const Axis& ax, const Axis& ay, F&& f) {
    Best best;
#pragma omp parallel
    {
        Best local;
#pragma omp for schedule(dynamic, 4) nowait
        for (int i = 0; i < ax.n; ++i) {
            const double x = ax.at(i);
            for (int j = 0; j < ay.n; ++j) {
                const double y = ay.at(j);
                offer(local, f(x, y), x, y);
            }
        }
#pragma omp critical(netprice_argmax_2d)
        {
            if (better(local, best)) best = local;
        }
    }
    return best;
}

/// Coarse lattice, then `rounds` passes over the +-1 cell window of the
/// incumbent with `points` nodes per axis. The incumbent is kept unless a
/// refined node strictly beats it.
template <class F>
Best argmax_1d_refined(const Axis& ax, int points, int rounds, F&& f) {
    Best best = argmax_1d(ax, f);
    Axis cur = ax;
    for (int r = 0; r < rounds && best.found; ++r) {
        cur = cur.around(best.x, points);
        Best fine = argmax_1d(cur, f);
        if (fine.found && fine.value > best.value) best = fine;
    }
    return best;
}

template <class F>
Best argmax_2d_refined(const Axis& ax, const Axis& ay, int points, int rounds, F&& f) {
    Best best = argmax_2d(ax, ay, f);
    Axis cx = ax, cy = ay;
    for (int r = 0; r < rounds && best.found; ++r) {
        cx = cx.around(best.x, points);
        cy = cy.around(best.y, points);
        Best fine = argmax_2d(cx, cy, f);
        if (fine.found && fine.value > best.value) best = fine;
    }
    return best;
}

}  // namespace netprice::grid
