// Timing comparison of the OpenMP loops against their serial reference:
// symbol-grid sampling and the multistart weight solve.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "ccd/spectral.hpp"
#include "ccd/stencil.hpp"
#include "ccd/weight_solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

ccd::PrefactoredWeights reference_weights() {
    std::array<double, 10> v = {0.694873424307114, -0.131382297347469, -1.0 / 18.0,
                                -1.353133294064189, 1.408688849619738, 0.702281465792022,
                                -0.041975669658848, 29.0 / 54.0, -3.458075345896445,
                                2.921038308859398};
    return ccd::PrefactoredWeights::from_array(v);
}

}  // namespace

int main(int argc, char** argv) {
    bool full = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--full") == 0) full = true;

    const std::size_t grid_points = full ? 2000000 : 100000;
    const int starts = full ? 64 : 8;

#ifdef _OPENMP
    std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    const ccd::PrefactoredWeights wts = reference_weights();
    const std::vector<double> wgrid = ccd::midpoint_wgrid(grid_points);

    {
        auto t0 = clock_type::now();
        const auto serial = ccd::sample_prefactored(wts, wgrid, false);
        const double ts = seconds_since(t0);
        t0 = clock_type::now();
        const auto parallel = ccd::sample_prefactored(wts, wgrid, true);
        const double tp = seconds_since(t0);

        double max_diff = 0.0;
        for (std::size_t i = 0; i < serial.size(); ++i)
            max_diff = std::max(max_diff, std::abs(serial[i].re_wp - parallel[i].re_wp));
        std::printf("symbol sampling (%zu points): serial %.3fs  parallel %.3fs  speedup %.2fx"
                    "  max diff %g\n",
                    grid_points, ts, tp, ts / tp, max_diff);
    }

    {
        const ccd::ResidualFn resfn =
            ccd::make_spectral_residual(ccd::build_ccd8(true), ccd::chebyshev_wgrid(64));
        auto t0 = clock_type::now();
        const auto serial = ccd::multistart(resfn, starts, 42, 1e-12, 120, false);
        const double ts = seconds_since(t0);
        t0 = clock_type::now();
        const auto parallel = ccd::multistart(resfn, starts, 42, 1e-12, 120, true);
        const double tp = seconds_since(t0);

        const bool identical =
            serial.best.start_index == parallel.best.start_index &&
            serial.best.residual_norm == parallel.best.residual_norm &&
            serial.roots.size() == parallel.roots.size();
        std::printf("multistart (%d starts): serial %.3fs  parallel %.3fs  speedup %.2fx  "
                    "results %s\n",
                    starts, ts, tp, ts / tp, identical ? "identical" : "DIFFER");
        std::printf("best residual %g from start %d, %zu distinct roots\n",
                    parallel.best.residual_norm, parallel.best.start_index,
                    parallel.roots.size());
        return identical ? 0 : 1;
    }
}
