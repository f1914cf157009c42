#ifndef KVNCPI_KVN_EVOLVE_HPP
#define KVNCPI_KVN_EVOLVE_HPP

#include "kvn/phase_grid.hpp"
#include "kvn/phase_space.hpp"

namespace kvn {

enum class KvnMethod { characteristics, spectral_split };

struct TransportOptions {
    double dt = 1e-3;        // backward-trajectory step
    int spline_order = 3;    // 1, 3 (default) or 5
    bool parallel = true;    // OpenMP over grid nodes; bitwise-identical to serial
};

struct TransportResult {
    KvNWave wave;
    long support_violations = 0;  // backward points that left the grid (value set to 0)
};

/// L_hat psi = (-i dH/dp d/dq + i dH/dq d/dp) psi via spectral differentiation.
/// `resolved` is false when the top 20% wavenumber band of psi carries more
/// than 1e-8 of the peak spectral amplitude.
struct LiouvillianResult {
    KvNWave wave;
    bool resolved = true;
};
LiouvillianResult liouvillian_apply(const PolynomialHamiltonian& H, const KvNWave& psi);

/// Semi-Lagrangian solution of i d_t psi = L_hat psi: one backward RK4
/// trajectory per node, then B-spline interpolation of the initial data
/// (exact up to interpolation since L_hat is first order).
TransportResult evolve_kvn_characteristics(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                           double T, const TransportOptions& opts = {});
/// Single-thread reference of the same computation, kept for testing; the
/// parallel version must match it bit for bit.
TransportResult evolve_kvn_characteristics_serial(const PolynomialHamiltonian& H,
                                                  const KvNWave& psi0, double T,
                                                  const TransportOptions& opts = {});

/// Strang-split spectral advection for separable H = T(p) + V(q): exact
/// constant-coefficient shifts in q and p alternate per step.
KvNWave evolve_kvn_spectral_split(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                  double T, double dt);

TransportResult evolve_kvn(const PolynomialHamiltonian& H, const KvNWave& psi0, double T,
                           KvnMethod method, const TransportOptions& opts = {});

/// The delta-kernel propagation of the classical transition amplitude: the
/// same characteristic transport exposed under its kernel name (asserted
/// identical, not merely close).
TransportResult classical_kernel_apply(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                       double T, const TransportOptions& opts = {});

/// Evolves psi and rho0 = |psi0|^2 by independent transports and compares
/// |psi(T)|^2 with rho(T).
struct CompatibilityReport {
    double l1_distance = 0.0;
    double psi_norm_drift = 0.0;   // | ||psi(T)|| - ||psi0|| |
    double rho_mass_drift = 0.0;   // | int rho(T) - int rho0 |
    long support_violations = 0;
};
CompatibilityReport density_compatibility(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                          double T, const TransportOptions& opts = {});

}  // namespace kvn

#endif
