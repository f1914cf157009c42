#ifndef KVNCPI_EXTENDED_DYNAMICS_HPP
#define KVNCPI_EXTENDED_DYNAMICS_HPP

#include <complex>
#include <vector>

#include "kvn/extended_state.hpp"
#include "kvn/phase_space.hpp"

namespace kvn {

struct ExtendedTrajectory {
    std::vector<double> times;
    std::vector<ExtendedState> states;

    const ExtendedState& final_state() const { return states.back(); }
};

/// RK4 integration of the characteristic equations of the Lie-derivative
/// generator:
///   phidot   = omega grad H
///   cdot     = A c                 A = omega Hess H
///   cbardot  = -A^T cbar
///   lambdadot = -A^T lambda - i t,  t_a = cbar_e omega^{ec} (d_c d_b d_a H) c^b
/// For quadratic H the third-derivative coupling vanishes and lambda stays
/// real for real input.
ExtendedTrajectory extended_flow(const PolynomialHamiltonian& H, const ExtendedState& s0,
                                 double T, double dt, int store_stride = 1);

/// Numeric-mode Lie derivative: lambda_a omega^{ab} d_b H + i cbar^T A c,
/// the ghost bilinear taken as an ordinary bilinear form of the coefficient
/// vectors. Complex because the i is kept.
std::complex<double> lie_derivative_value(const PolynomialHamiltonian& H,
                                          const ExtendedState& s);

/// Candidate invariants monitored along extended trajectories. Q and Qbar
/// are conserved for quadratic H only (the third-derivative term in
/// lambdadot breaks them beyond that); Htilde and the ghost pairing are
/// conserved for every polynomial H.
struct ChargeSeries {
    std::vector<double> times;
    std::vector<std::complex<double>> h_tilde;
    std::vector<double> ghost_pairing;             // cbar_a c^a
    std::vector<std::complex<double>> q_charge;    // i c^a lambda_a
    std::vector<std::complex<double>> qbar_charge; // i cbar_a omega^{ab} lambda_b

    struct Drift {
        double h_tilde = 0.0;
        double ghost_pairing = 0.0;
        double q_charge = 0.0;
        double qbar_charge = 0.0;
    };
    Drift max_drift() const;
};

ChargeSeries conserved_charges(const PolynomialHamiltonian& H, const ExtendedTrajectory& traj);

/// One-form with polynomial coefficient functions psi_a(phi).
struct PolyOneForm {
    std::vector<Polynomial> comp;  // 2n entries over 2n variables

    static PolyOneForm zero(int dof);
    /// df for a polynomial function f.
    static PolyOneForm exterior_derivative(const Polynomial& f, int dof);
};

/// Finite-time pullback transport of a one-form:
///   (psi_T)_a(phi) = psi_b(Phi_{-T}(phi)) * d(Phi_{-T})^b / dphi^a,
/// evaluated pointwise through the backward flow and its tangent.
class TransportedOneForm {
  public:
    TransportedOneForm(const PolynomialHamiltonian& H, PolyOneForm form, double T, double dt);
    Eigen::VectorXd eval(const Eigen::VectorXd& phi) const;
    double time() const { return T_; }

  private:
    PolynomialHamiltonian reversed_;
    PolyOneForm form_;
    double T_;
    double dt_;
};

TransportedOneForm transport_one_form(const PolynomialHamiltonian& H, PolyOneForm form,
                                      double T, double dt = 1e-3);

}  // namespace kvn

#endif
