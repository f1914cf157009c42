#ifndef KVNCPI_SUPERFIELD_HPP
#define KVNCPI_SUPERFIELD_HPP

#include <span>
#include <vector>

#include "kvn/extended_state.hpp"
#include "kvn/grassmann.hpp"
#include "kvn/phase_space.hpp"

namespace kvn {

/// The fixed Grassmann algebra for n degrees of freedom:
/// generators theta, thetabar, c^1..c^{2n}, cbar_1..cbar_{2n} in that
/// (canonical) order. 2 + 4n generators total.
struct CpiAlgebra {
    int dof = 1;
    GeneratorSetPtr gens;

    static CpiAlgebra make(int dof);

    std::size_t theta() const { return 0; }
    std::size_t thetabar() const { return 1; }
    std::size_t c_index(int a) const { return 2 + static_cast<std::size_t>(a); }
    std::size_t cbar_index(int a) const { return 2 + 2 * dof + static_cast<std::size_t>(a); }

    Mask theta_mask() const { return Mask{1}; }
    Mask thetabar_mask() const { return Mask{2}; }
    Mask theta_thetabar_mask() const { return Mask{3}; }

    GrassmannElement zero() const { return GrassmannElement::zero(gens); }
    GrassmannElement scalar(Complex v) const { return GrassmannElement::scalar(gens, v); }
    GrassmannElement gen(std::size_t idx) const { return GrassmannElement::generator(gens, idx); }
};

/// Component quadruple of Phi^a; the assembled element is
///   phi + theta*c + thetabar*(omega cbar) + i*thetabar*theta*(omega lambda),
/// stored without the explicit i on the lambda part.
struct Superfield {
    Complex phi{0.0, 0.0};
    GrassmannElement c_part;
    GrassmannElement omega_cbar_part;
    GrassmannElement omega_lambda_part;

    GrassmannElement element(const CpiAlgebra& alg) const;
};

/// Numeric-mode multiplet: c^a(t) -> c[a] * C^a etc., lambda as scalars.
std::vector<Superfield> superfields_from_state(const CpiAlgebra& alg, const ExtendedState& s);

/// Evaluates the polynomial H with the assembled superfield elements
/// substituted for the phase-space variables (superfields are even, so the
/// substitution is unambiguous).
GrassmannElement evaluate_in_algebra(const Polynomial& h, const CpiAlgebra& alg,
                                     const std::vector<GrassmannElement>& vars);

/// Lie-derivative generator as an algebra element at one extended state:
///   lambda_a omega^{ab} d_b H  +  i cbar_a omega^{ac} (d_c d_b H) c^b
/// with the ghosts as generator-valued elements.
GrassmannElement lie_derivative_element(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                        const ExtendedState& s);

/// H(Phi) decomposed into its four superspace components via the nilpotent
/// Taylor expansion H(phi) + dH·dPhi + (1/2) d2H·dPhi dPhi (the cubic
/// remainder vanishes identically in the algebra). The theta-thetabar
/// coefficient is checked against i times the independently assembled
/// Lie-derivative element; the relative residual of that identity is
/// reported.
struct HamiltonianExpansion {
    GrassmannElement h0;             // component at theta = thetabar = 0
    GrassmannElement theta_comp;     // coefficient of theta
    GrassmannElement thetabar_comp;  // coefficient of thetabar
    GrassmannElement top_comp;       // coefficient of theta*thetabar
    GrassmannElement h_tilde;        // independent Lie-derivative element
    double identity_residual = 0.0;  // || top - i*h_tilde || / scale
};

HamiltonianExpansion expand_hamiltonian(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                        const ExtendedState& s);

/// Discretized superspace action and its multiplet decomposition.
///
/// S[Phi] = sum_k [ Phi^p_k · (Phi^q_{k+1} - Phi^q_k) - H(Phi_k) dt ]
/// (left-point rule). The theta-thetabar coefficient is compared against
/// i*(S_tilde - surface_term), where S_tilde is the independently coded
/// discretization of the extended action
///   sum_k [ lambda_{q,k} dq_k + lambda_{p,k+1} dp_k
///           + i cbar_{q,k} dc^q_k + i cbar_{p,k+1} dc^p_k - Htilde_k dt ]
/// (the unique summation-by-parts partner of the left-point S[Phi]) and
/// surface_term = (lambda_p p + i cbar_p c^p) at the last state minus the
/// first, per index pair.
///
/// The theta^0 component is a pure scalar and equals the discretized
/// S[phi]; s_phi holds the same number computed by the plain accumulator
/// sum_k [ sum_j p_j dq_j - H(phi_k) dt ] in slice order, which matches the
/// algebra's coefficient bit for bit.
/// One slice's contribution, decomposed like the total.
struct SuperActionSlice {
    GrassmannElement theta0, theta_comp, thetabar_comp, top_comp;
};

struct SuperActionResult {
    GrassmannElement total;              // S[Phi]
    GrassmannElement theta0;             // theta^0 component (scalar element)
    GrassmannElement theta_comp;         // the T functional (reported, not asserted)
    GrassmannElement thetabar_comp;      // the V functional (reported, not asserted)
    GrassmannElement top_comp;           // theta*thetabar coefficient
    GrassmannElement s_tilde;            // independent extended-action sum
    GrassmannElement surface_term;       // endpoint expression
    std::vector<SuperActionSlice> slices;
    double s_phi = 0.0;                  // discretized classical action
    double identity_residual = 0.0;      // || top - i (s_tilde - surface) || / scale
};

SuperActionResult discretized_superaction(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                          std::span<const ExtendedState> path, double dt);

/// Momentum-representation counterpart: sum_k [ -Phi^q_k dPhi^p_k - H(Phi_k) dt ].
/// Here s_tilde is the direct left-point discretization of
///   lambda_p pdot - q lambdadot_q + i c^q cbardot_q + i cbar_p cdot^p - Htilde
/// and the surface term is zero (no summation by parts is needed).
SuperActionResult momentum_superaction(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                       std::span<const ExtendedState> path, double dt);

/// i * Berezin integral over (theta, thetabar) and the theta,thetabar -> 0
/// restriction of a superspace action element.
struct BerezinBridge {
    GrassmannElement classical_weight;  // i * int dtheta dthetabar S  (= S_tilde - s.t.)
    Complex quantum_weight;             // theta,thetabar -> 0 restriction (= S[phi])
};

BerezinBridge berezin_bridge(const CpiAlgebra& alg, const GrassmannElement& s_super);

/// Quantum phase (1/Delta) * (theta,thetabar -> 0 restriction). Delta > 0.
double freeze(const CpiAlgebra& alg, const GrassmannElement& s_super, double delta);

}  // namespace kvn

#endif
