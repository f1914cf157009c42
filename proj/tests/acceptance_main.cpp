// End-to-end acceptance runner: one pass/fail line per criterion, every
// tolerance pinned in code. Exit status 0 only when all criteria hold.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kvn/extended_dynamics.hpp"
#include "kvn/kvn_evolve.hpp"
#include "kvn/propagator.hpp"
#include "kvn/randomized.hpp"
#include "kvn/superfield.hpp"

using namespace kvn;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const std::vector<GaussianPacket> kPackets = {{0.0, 1.0, 0.0}, {1.0, 1.0, 2.0}, {-2.0, 0.7, -1.0}};
const SpatialGrid1D kGrid{-20.0, 20.0, 1024};

// 1. theta-thetabar coefficient of H(Phi) equals i*Htilde, 100 random H
Outcome superfield_hamiltonian_identity() {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        const int dof = 1 + static_cast<int>(rng() % 2);
        const CpiAlgebra alg = CpiAlgebra::make(dof);
        const auto h = random_polynomial_hamiltonian(dof, 6, rng);
        const auto ex = expand_hamiltonian(h, alg, random_extended_state(dof, rng, (it % 2) == 1));
        worst = std::max(worst, ex.identity_residual);
    }
    return {worst <= 1e-12, fmt("max_residual=%.3e (tol 1e-12, 100 instances)", worst)};
}

// 2. multiplet identity of the discretized action + exact theta^0 restriction
Outcome action_multiplet_identity() {
    std::mt19937_64 rng(1002);
    double worst = 0.0;
    bool exact = true;
    for (int it = 0; it < 100; ++it) {
        const int dof = 1 + static_cast<int>(rng() % 2);
        const CpiAlgebra alg = CpiAlgebra::make(dof);
        const auto h = random_polynomial_hamiltonian(dof, 6, rng);
        const int slices = 3 + static_cast<int>(rng() % 18);
        const auto path = random_extended_path(dof, slices + 1, rng);
        const auto res = discretized_superaction(h, alg, path, 0.05 + 0.001 * (rng() % 100));
        worst = std::max(worst, res.identity_residual);
        exact = exact && res.theta0.coefficient(0) == Complex(res.s_phi, 0.0);
    }
    return {worst <= 1e-12 && exact,
            fmt("max_residual=%.3e (tol 1e-12), theta0 restriction exact=%s", worst,
                exact ? "yes" : "NO")};
}

// 3. c(T) = M(T) c(0), M cross-checked against finite differences
Outcome tangent_map_property() {
    double worst_c = 0.0, worst_fd = 0.0;
    for (const auto& h : {PolynomialHamiltonian::harmonic(), PolynomialHamiltonian::free_particle(),
                          PolynomialHamiltonian::quartic(1.0)}) {
        ExtendedState s0 = ExtendedState::zeros(1);
        s0.phi << 0.9, -0.3;
        s0.c << 0.73, -0.41;
        const double T = 10.0, dt = 1e-3;
        const auto traj = extended_flow(h, s0, T, dt, 1 << 30);
        const auto m = integrate_flow(h, s0.phi, T, dt, true, 1 << 30).final_tangent();
        worst_c = std::max(worst_c,
                           (traj.final_state().c - m * s0.c).cwiseAbs().maxCoeff());
        const auto fd = finite_difference_jacobian(h, s0.phi, T, dt, 1e-5);
        worst_fd = std::max(worst_fd, (m - fd).cwiseAbs().maxCoeff());
    }
    return {worst_c <= 1e-6 && worst_fd <= 1e-5,
            fmt("|c(T)-Mc(0)|=%.3e (tol 1e-6), |M-fd|=%.3e (tol 1e-5)", worst_c, worst_fd)};
}

// 4. conserved charges: quadratic drifts <= 1e-8; quartic Htilde <= 1e-6
//    with the RK4 ratio in [12, 20] under dt halving
Outcome conservation_suite() {
    ExtendedState s0 = ExtendedState::zeros(1);
    s0.phi << 1.0, 0.5;
    s0.lambda << Complex(0.3, 0.0), Complex(-0.8, 0.0);
    s0.c << 0.7, -0.2;
    s0.cbar << -0.5, 0.9;

    const auto harm = PolynomialHamiltonian::harmonic();
    const auto dq = conserved_charges(harm, extended_flow(harm, s0, 10.0, 1e-3, 100)).max_drift();
    const double quad_worst =
        std::max({dq.h_tilde, dq.ghost_pairing, dq.q_charge, dq.qbar_charge});

    const auto quartic = PolynomialHamiltonian::quartic(1.0);
    auto drift_at = [&](double dt) {
        return conserved_charges(quartic, extended_flow(quartic, s0, 5.0, dt, 10))
            .max_drift()
            .h_tilde;
    };
    const double dq1 = drift_at(1e-3);
    const double ratio = drift_at(4e-3) / drift_at(2e-3);
    const bool pass = quad_worst <= 1e-8 && dq1 <= 1e-6 && ratio >= 12.0 && ratio <= 20.0;
    return {pass, fmt("quadratic=%.3e (tol 1e-8), quartic Htilde=%.3e (tol 1e-6), ratio=%.1f",
                      quad_worst, dq1, ratio)};
}

// 5. |psi(T)|^2 vs independently transported rho at N=256, T=1, harmonic
Outcome kvn_compatibility() {
    const auto h = PolynomialHamiltonian::harmonic();
    const PhaseGrid g{-8.0, 8.0, -8.0, 8.0, 256, 256};
    const auto psi0 = KvNWave::gaussian(g, 1.0, 0.0, 1.0);
    const auto rep = density_compatibility(h, psi0, 1.0);
    const bool pass = rep.l1_distance <= 1e-6 && rep.psi_norm_drift <= 1e-6;
    return {pass, fmt("L1=%.3e, norm_drift=%.3e (tol 1e-6, N=256, T=1)", rep.l1_distance,
                      rep.psi_norm_drift)};
}

// 6. delta-kernel transport tracks the closed-form trajectory within a cell
Outcome classical_kernel_tracking() {
    const auto h = PolynomialHamiltonian::harmonic();
    const PhaseGrid g{-8.0, 8.0, -8.0, 8.0, 256, 256};
    const auto narrow = KvNWave::gaussian(g, 1.0, 0.0, 0.2);
    const auto moved = classical_kernel_apply(h, narrow, M_PI / 2.0);
    const auto [qc, pc] = moved.wave.centroid_abs2();
    const double err = std::max(std::fabs(qc - 0.0), std::fabs(pc + 1.0));
    return {err <= g.dq(), fmt("center_error=%.3e (tol %.3e = one cell)", err, g.dq())};
}

// 7. free and Mehler kernels against closed forms; Trotter ratio in [3.5,4.5]
Outcome quantum_oracles() {
    const auto free_h = PolynomialHamiltonian::free_particle();
    const auto harm = PolynomialHamiltonian::harmonic();
    const auto free_prop = position_propagator(free_h, kGrid, 1.0, {256, Splitting::strang}, 1.0);
    const double err_free = packet_oracle_error(free_prop, kPackets, [&](const GaussianPacket& p) {
        return free_kernel_action(kGrid, 1.0, p, 1.0, 1.0);
    });
    const double T = M_PI / 4.0;
    auto mehler_at = [&](int ns) {
        const auto prop = position_propagator(harm, kGrid, T, {ns, Splitting::strang}, 1.0);
        return packet_oracle_error(prop, kPackets, [&](const GaussianPacket& p) {
            return mehler_kernel_action(kGrid, T, p, 1.0);
        });
    };
    const double e128 = mehler_at(128), e256 = mehler_at(256);
    const double ratio = e128 / e256;
    const bool pass = err_free <= 1e-6 && e256 <= 1e-5 && ratio >= 3.5 && ratio <= 4.5;
    return {pass, fmt("free=%.3e (tol 1e-6), mehler=%.3e (tol 1e-5), ratio=%.2f", err_free, e256,
                      ratio)};
}

// 8. Fourier-conjugated position kernel vs momentum kernel
Outcome representation_duality() {
    const auto free_h = PolynomialHamiltonian::free_particle();
    const auto harm = PolynomialHamiltonian::harmonic();
    const double r_free = fourier_duality_residual(
        position_propagator(free_h, kGrid, 1.0, {256, Splitting::strang}, 1.0),
        momentum_propagator(free_h, kGrid, 1.0, {256, Splitting::strang}, 1.0), kPackets);
    const double T = M_PI / 4.0;
    const double r_harm = fourier_duality_residual(
        position_propagator(harm, kGrid, T, {256, Splitting::strang}, 1.0),
        momentum_propagator(harm, kGrid, T, {256, Splitting::strang}, 1.0), kPackets);
    const bool pass = r_free <= 1e-4 && r_harm <= 1e-4;
    return {pass, fmt("free=%.3e, harmonic=%.3e (tol 1e-4)", r_free, r_harm)};
}

// 9. lattice path sum vs transfer matrix; summed phase bitwise equal to the
//    theta,thetabar -> 0 superspace restriction on the same slices
Outcome bridge_brute_force() {
    const auto h = PolynomialHamiltonian::harmonic();
    BridgeSpec spec;
    spec.points = 9;
    spec.slices = 4;
    const auto rep = bridge_demonstration(h, spec);

    std::mt19937_64 rng(1009);
    const CpiAlgebra alg = CpiAlgebra::make(1);
    const double dx = (spec.xmax - spec.xmin) / spec.points;
    bool bitwise = true;
    for (int s = 0; s < 100; ++s) {
        std::vector<Eigen::VectorXd> path;
        std::vector<ExtendedState> states;
        for (int k = 0; k <= spec.slices; ++k) {
            Eigen::VectorXd st(2);
            st[0] = spec.xmin + dx * static_cast<double>(rng() % 9);
            st[1] = spec.delta * fft_frequency(static_cast<int>(rng() % 9), spec.points, dx);
            path.push_back(st);
            ExtendedState es = ExtendedState::zeros(1);
            es.phi = st;
            es.c << 0.3, -0.9;
            es.cbar << 1.1, 0.4;
            es.lambda << Complex(0.2, 0.0), Complex(-0.6, 0.0);
            states.push_back(es);
        }
        const double acc = sliced_action(h, path, spec.dt);
        const Complex s0 =
            discretized_superaction(h, alg, states, spec.dt).theta0.coefficient(0);
        if (s0.imag() != 0.0 || (acc != 0.0 && !same_bits(s0.real(), acc))) bitwise = false;
    }
    const bool pass = rep.rel_error <= 1e-10 && bitwise;
    return {pass, fmt("rel_error=%.3e (tol 1e-10, %ld paths), phase bitwise=%s", rep.rel_error,
                      rep.paths, bitwise ? "yes" : "NO")};
}

// 10. doubling Delta halves every sliced phase, bitwise, before exponentiation
Outcome delta_scaling() {
    const auto h = PolynomialHamiltonian::quartic(0.7);
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    bool ok = true;
    for (int it = 0; it < 100; ++it) {
        std::vector<Eigen::VectorXd> path;
        for (int k = 0; k < 8; ++k) {
            Eigen::VectorXd st(2);
            st << u(rng), u(rng);
            path.push_back(st);
        }
        for (double delta : {0.5, 1.0, 3.0}) {
            const auto p1 = sliced_phases(h, path, 0.1, delta);
            const auto p2 = sliced_phases(h, path, 0.1, 2.0 * delta);
            for (std::size_t k = 0; k < p1.size(); ++k)
                if (!same_bits(p2[k], p1[k] / 2.0)) ok = false;
        }
    }
    return {ok, std::string("bitwise halving on the phase accumulator: ") + (ok ? "yes" : "NO")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"superfield-hamiltonian-identity", superfield_hamiltonian_identity},
        {"action-multiplet-identity", action_multiplet_identity},
        {"tangent-map-property", tangent_map_property},
        {"conservation-suite", conservation_suite},
        {"kvn-compatibility", kvn_compatibility},
        {"classical-kernel-tracking", classical_kernel_tracking},
        {"quantum-oracles", quantum_oracles},
        {"representation-duality", representation_duality},
        {"bridge-brute-force", bridge_brute_force},
        {"delta-scaling", delta_scaling},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome out = criteria[i].run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%2zu/%zu] %s %-34s %s [%.1fs]\n", i + 1, criteria.size(),
                    out.pass ? "PASS" : "FAIL", criteria[i].name, out.detail.c_str(), secs);
        if (!out.pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
