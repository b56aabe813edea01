#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include <omp.h>

#include "netprice/connectivity.hpp"
#include "netprice/grid.hpp"
#include "netprice/solution.hpp"

using namespace netprice;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 201;
    ConnectivityParams params;
    params.c1 = 0.2;
    params.c2 = 0.3;
    params.gamma = 0.7;
    connectivity::SolverOptions opt;
    auto profit = [&](double p1, double p12) {
        if (p12 < p1) return std::numeric_limits<double>::quiet_NaN();
        const PriceProfile prices{p1, std::nullopt, p12};
        return menu_profit(prices, connectivity::hybrid_demands(p1, p12, params, opt), params.c1,
                           params.c2);
    };
    const grid::Axis axis{0.0, 1.0, n};
    grid::Best serial, parallel;
    const double ts = seconds([&] { serial = grid::argmax_2d_serial(axis, axis, profit); });
    const double tp = seconds([&] { parallel = grid::argmax_2d(axis, axis, profit); });
    std::printf("grid=%dx%d threads=%d\n", n, n, omp_get_max_threads());
    std::printf("serial_s=%.4f parallel_s=%.4f speedup=%.2f\n", ts, tp, ts / tp);
    std::printf("serial: profit=%.12g p1=%.6g p12=%.6g\n", serial.value, serial.x, serial.y);
    std::printf("parallel: profit=%.12g p1=%.6g p12=%.6g\n", parallel.value, parallel.x, parallel.y);
    const bool same = serial.value == parallel.value && serial.x == parallel.x && serial.y == parallel.y;
    std::printf("identical=%s\n", same ? "true" : "false");
    return same ? 0 : 1;
}
