#ifndef KVNCPI_PROPAGATOR_HPP
#define KVNCPI_PROPAGATOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kvn/fft.hpp"
#include "kvn/phase_space.hpp"

namespace kvn {

/// Periodic spatial lattice x_j = xmin + j dx, dx = (xmax - xmin)/n.
/// The conjugate momentum lattice is p_m = Delta * k_m with k_m the FFT
/// wavenumbers of the grid.
struct SpatialGrid1D {
    double xmin = -10.0, xmax = 10.0;
    int n = 256;

    void validate() const;
    double dx() const { return (xmax - xmin) / n; }
    double x(int j) const { return xmin + dx() * j; }
    double momentum(int m, double delta) const { return delta * fft_frequency(m, n, dx()); }
    bool operator==(const SpatialGrid1D&) const = default;
};

enum class Splitting { strang, lie };
enum class Representation { position, momentum };

struct SlicingScheme {
    int slices = 1;
    Splitting splitting = Splitting::strang;
};

/// psi0(x) = (pi w^2)^{-1/4} exp(-(x-a)^2/(2 w^2) + i k (x-a)); the packets
/// every kernel-oracle comparison runs on.
struct GaussianPacket {
    double center = 0.0;
    double width = 1.0;
    double wavenumber = 0.0;
};

/// Time-sliced evolution kernel in one representation, held as its split
/// factors; apply() runs the sweeps, materialize() samples the kernel
/// matrix K(x_f, T | x_i) column by column.
class Propagator {
  public:
    Propagator(Representation rep, const PolynomialHamiltonian& H, SpatialGrid1D grid,
               double T, SlicingScheme scheme, double delta);

    Representation representation() const { return rep_; }
    const SpatialGrid1D& grid() const { return grid_; }
    double time() const { return time_; }
    double delta() const { return delta_; }
    const SlicingScheme& scheme() const { return scheme_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& state) const;
    Eigen::MatrixXcd materialize(bool parallel = true) const;

  private:
    Representation rep_;
    SpatialGrid1D grid_;
    double time_;
    double delta_;
    SlicingScheme scheme_;
    double dt_;
    Eigen::VectorXcd exp_v_, exp_v_half_, exp_k_, exp_k_half_, twiddle_;
    bool potential_is_zero_;
    std::shared_ptr<const Fft1D> fft_;
};

/// Kernel of the sliced position-representation evolution for separable
/// H = T(p) + V(q); split-operator sweeps (kinetic in momentum space,
/// potential in position space). Throws for non-separable H.
Propagator position_propagator(const PolynomialHamiltonian& H, const SpatialGrid1D& grid,
                               double T, const SlicingScheme& scheme, double delta);

/// Momentum-representation kernel with the conjugate sweep order.
Propagator momentum_propagator(const PolynomialHamiltonian& H, const SpatialGrid1D& grid,
                               double T, const SlicingScheme& scheme, double delta);

// Delta-scaled grid Fourier transforms between the two representations:
// phi(p_m) = dx/sqrt(2 pi Delta) * sum_j exp(-i p_m x_j / Delta) psi(x_j).
Eigen::VectorXcd to_momentum_rep(const SpatialGrid1D& grid, double delta,
                                 const Eigen::VectorXcd& psi);
Eigen::VectorXcd to_position_rep(const SpatialGrid1D& grid, double delta,
                                 const Eigen::VectorXcd& phi);

// ---- closed-form oracles (exact complex Gaussian integrals) ----

Eigen::VectorXcd packet_values(const SpatialGrid1D& grid, const GaussianPacket& pkt);
Eigen::VectorXcd packet_momentum_values(const SpatialGrid1D& grid, double delta,
                                        const GaussianPacket& pkt);

/// Free kernel sqrt(m/(2 pi i Delta T)) exp(i m (xf-xi)^2/(2 Delta T))
/// integrated against the packet.
Eigen::VectorXcd free_kernel_action(const SpatialGrid1D& grid, double T,
                                    const GaussianPacket& pkt, double mass, double delta);
/// Mehler kernel sqrt(1/(2 pi i Delta sin T)) *
/// exp(i[(xf^2+xi^2) cos T - 2 xf xi]/(2 Delta sin T)) against the packet
/// (m = omega = 1).
Eigen::VectorXcd mehler_kernel_action(const SpatialGrid1D& grid, double T,
                                      const GaussianPacket& pkt, double delta);
/// Same kernels in the momentum representation (free motion is diagonal;
/// the harmonic oscillator is self-dual, so the Mehler form carries over).
Eigen::VectorXcd free_momentum_kernel_action(const SpatialGrid1D& grid, double T,
                                             const GaussianPacket& pkt, double mass,
                                             double delta);
Eigen::VectorXcd mehler_momentum_kernel_action(const SpatialGrid1D& grid, double T,
                                               const GaussianPacket& pkt, double delta);

/// max over packets of ||prop(packet) - oracle(packet)||_2 * sqrt(measure),
/// relative to the oracle norm.
double packet_oracle_error(const Propagator& prop,
                           std::span<const GaussianPacket> packets,
                           const std::function<Eigen::VectorXcd(const GaussianPacket&)>& oracle);

/// Representation duality on the packet family:
/// max_pkt || F K_pos F^{-1} pkt - K_mom pkt ||_2 / ||...||_2.
double fourier_duality_residual(const Propagator& k_pos, const Propagator& k_mom,
                                std::span<const GaussianPacket> packets);

// ---- sliced phases: the quantization-bridge accumulators ----

/// Canonical sliced phase-space action sum_k [ sum_j p_j dq_j - H(phi_k) dt ]
/// accumulated in slice order. The bridge tests compare this bitwise against
/// the theta,thetabar -> 0 restriction of the superspace action on the same
/// slices, so the operation order here is load-bearing.
double sliced_action(const PolynomialHamiltonian& H,
                     std::span<const Eigen::VectorXd> path, double dt);

/// Per-slice phases S_k / Delta (exactly fl(S_k / Delta); doubling Delta
/// halves each entry bitwise).
std::vector<double> sliced_phases(const PolynomialHamiltonian& H,
                                  std::span<const Eigen::VectorXd> path, double dt,
                                  double delta);

// ---- brute-force lattice bridge ----

struct BridgeSpec {
    int points = 7;        // spatial lattice size (<= 9 in the desk-scale checks)
    int slices = 3;        // <= 4
    double xmin = -3.0, xmax = 3.0;
    double dt = 0.25;
    double delta = 1.0;
    long max_paths = 1000000;  // guard on interior q-path count
};

struct BridgeReport {
    Eigen::MatrixXcd path_sum;  // endpoint kernel from full path enumeration
    Eigen::MatrixXcd transfer;  // product of one-slice transfer matrices
    double rel_error = 0.0;     // Frobenius-relative difference
    long paths = 0;             // interior q-paths per endpoint pair
};

/// Sums exp(i S[phi]/Delta) over every lattice path (interior positions
/// enumerated explicitly, the per-slice momentum sums carried out exactly)
/// and compares with the transfer-matrix product — the same finite sum
/// reorganized. Throws when the interior path count exceeds the guard.
BridgeReport bridge_demonstration(const PolynomialHamiltonian& H, const BridgeSpec& spec);

/// Variance of |state|^2 on the lattice (for the spreading-contrast check).
double position_variance(const SpatialGrid1D& grid, const Eigen::VectorXcd& state);

}  // namespace kvn

#endif
