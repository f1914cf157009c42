// Wall-clock comparison of the serial reference kernels against their
// OpenMP versions: semi-Lagrangian phase-space transport and kernel-matrix
// assembly. Prints one CSV row per kernel; run with OMP_NUM_THREADS set to
// taste.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kvn/kvn_evolve.hpp"
#include "kvn/propagator.hpp"

namespace {

template <typename F>
double time_of(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("# omp_max_threads=%d\n", omp_get_max_threads());
#else
    std::printf("# built without OpenMP; both columns run serial code\n");
#endif
    std::printf("kernel,serial_s,parallel_s,speedup\n");

    {
        const auto h = kvn::PolynomialHamiltonian::harmonic();
        const kvn::PhaseGrid g{-8.0, 8.0, -8.0, 8.0, 192, 192};
        const auto psi0 = kvn::KvNWave::gaussian(g, 1.0, 0.0, 1.0);
        kvn::TransportOptions opts;
        opts.dt = 2e-3;
        const double ts = time_of([&] {
            (void)kvn::evolve_kvn_characteristics_serial(h, psi0, 1.0, opts);
        });
        const double tp = time_of([&] {
            (void)kvn::evolve_kvn_characteristics(h, psi0, 1.0, opts);
        });
        std::printf("semi_lagrangian_transport,%.4f,%.4f,%.2f\n", ts, tp, ts / tp);
    }

    {
        const auto h = kvn::PolynomialHamiltonian::harmonic();
        const kvn::SpatialGrid1D g{-20.0, 20.0, 512};
        const auto prop = kvn::position_propagator(h, g, 1.0, {64, kvn::Splitting::strang}, 1.0);
        const double ts = time_of([&] { (void)prop.materialize(false); });
        const double tp = time_of([&] { (void)prop.materialize(true); });
        std::printf("kernel_matrix_assembly,%.4f,%.4f,%.2f\n", ts, tp, ts / tp);
    }
    return 0;
}
