#include "kvn/superfield.hpp"

#include <stdexcept>

namespace kvn {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Components {
    GrassmannElement theta0, theta_comp, thetabar_comp, top;
};

// Multiplet decomposition a = theta0 + theta*T + thetabar*V + theta*thetabar*W.
Components decompose(const CpiAlgebra& alg, const GrassmannElement& a) {
    const Mask th = alg.theta_mask();
    const Mask tb = alg.thetabar_mask();
    return Components{
        restrict_away(a, th | tb),
        coefficient_of(restrict_away(a, tb), th),
        coefficient_of(restrict_away(a, th), tb),
        coefficient_of(a, th | tb),
    };
}

double relative_residual(const GrassmannElement& lhs, const GrassmannElement& rhs) {
    const double scale = std::max({lhs.norm(), rhs.norm(), 1e-300});
    return (lhs - rhs).norm() / scale;
}

// (omega v)^a for the standard block form, v indexed like (q_1..q_n, p_1..p_n).
int omega_partner(int n, int a) { return a < n ? n + a : a - n; }
double omega_sign(int n, int a) { return a < n ? 1.0 : -1.0; }

}  // namespace

CpiAlgebra CpiAlgebra::make(int dof) {
    if (dof < 1) throw std::invalid_argument("CpiAlgebra: dof must be >= 1");
    std::vector<std::string> names;
    names.reserve(2 + 4 * static_cast<std::size_t>(dof));
    names.emplace_back("theta");
    names.emplace_back("thetabar");
    for (int a = 0; a < 2 * dof; ++a) names.push_back("c" + std::to_string(a + 1));
    for (int a = 0; a < 2 * dof; ++a) names.push_back("cb" + std::to_string(a + 1));
    CpiAlgebra alg;
    alg.dof = dof;
    alg.gens = std::make_shared<const GeneratorSet>(std::move(names));
    return alg;
}

GrassmannElement Superfield::element(const CpiAlgebra& alg) const {
    GrassmannElement out = alg.scalar(phi);
    out += alg.gen(alg.theta()) * c_part;
    out += alg.gen(alg.thetabar()) * omega_cbar_part;
    out += kI * (alg.gen(alg.thetabar()) * (alg.gen(alg.theta()) * omega_lambda_part));
    return out;
}

std::vector<Superfield> superfields_from_state(const CpiAlgebra& alg, const ExtendedState& s) {
    const int n = alg.dof;
    const int d = 2 * n;
    if (s.dim() != d) throw std::invalid_argument("superfields_from_state: state dimension mismatch");
    std::vector<Superfield> out;
    out.reserve(d);
    for (int a = 0; a < d; ++a) {
        const int b = omega_partner(n, a);
        const double sign = omega_sign(n, a);
        Superfield f{Complex(s.phi[a], 0.0), alg.zero(), alg.zero(), alg.zero()};
        f.c_part = GrassmannElement::monomial(alg.gens, Mask{1} << alg.c_index(a),
                                              Complex(s.c[a], 0.0));
        f.omega_cbar_part = GrassmannElement::monomial(alg.gens, Mask{1} << alg.cbar_index(b),
                                                       Complex(sign * s.cbar[b], 0.0));
        f.omega_lambda_part = alg.scalar(sign * s.lambda[b]);
        out.push_back(std::move(f));
    }
    return out;
}

GrassmannElement evaluate_in_algebra(const Polynomial& h, const CpiAlgebra& alg,
                                     const std::vector<GrassmannElement>& vars) {
    if (static_cast<int>(vars.size()) != h.nvars())
        throw std::invalid_argument("evaluate_in_algebra: variable count mismatch");
    GrassmannElement acc = alg.zero();
    for (const auto& [exps, coeff] : h.terms()) {
        GrassmannElement term = alg.scalar(Complex(coeff, 0.0));
        for (int i = 0; i < h.nvars(); ++i)
            for (int e = 0; e < exps[i]; ++e) term = term * vars[i];
        acc += term;
    }
    return acc;
}

GrassmannElement lie_derivative_element(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                        const ExtendedState& s) {
    const int d = H.dim();
    const Eigen::VectorXd field = H.vector_field(s.phi);       // omega grad H
    const Eigen::MatrixXd a_mat = H.stability_matrix(s.phi);   // omega Hess H

    Complex lam_part{0.0, 0.0};
    for (int a = 0; a < d; ++a) lam_part += s.lambda[a] * field[a];
    GrassmannElement out = alg.scalar(lam_part);

    for (int a = 0; a < d; ++a) {
        if (s.cbar[a] == 0.0) continue;
        for (int b = 0; b < d; ++b) {
            const double w = a_mat(a, b);
            if (w == 0.0 || s.c[b] == 0.0) continue;
            const GrassmannElement cb =
                GrassmannElement::monomial(alg.gens, Mask{1} << alg.cbar_index(a),
                                           Complex(s.cbar[a], 0.0));
            const GrassmannElement cc = GrassmannElement::monomial(
                alg.gens, Mask{1} << alg.c_index(b), Complex(s.c[b], 0.0));
            out += kI * Complex(w, 0.0) * (cb * cc);
        }
    }
    return out;
}

namespace {

// Nilpotent Taylor expansion of H(Phi); (dPhi)^3 vanishes identically in the
// algebra, so the expansion is exact.
GrassmannElement expand_hamiltonian_element(const PolynomialHamiltonian& H,
                                            const CpiAlgebra& alg, const ExtendedState& s) {
    const int d = H.dim();
    if (alg.dof != H.dof())
        throw std::invalid_argument("expand_hamiltonian: algebra/Hamiltonian dof mismatch");
    const std::vector<Superfield> fields = superfields_from_state(alg, s);

    std::vector<GrassmannElement> delta;  // dPhi^a = Phi^a - phi^a
    delta.reserve(d);
    for (int a = 0; a < d; ++a)
        delta.push_back(fields[a].element(alg) - alg.scalar(fields[a].phi));

    const Eigen::VectorXd grad = H.gradient(s.phi);
    const Eigen::MatrixXd hess = H.hessian(s.phi);
    GrassmannElement expanded = alg.scalar(Complex(H.value(s.phi), 0.0));
    for (int a = 0; a < d; ++a)
        if (grad[a] != 0.0) expanded += Complex(grad[a], 0.0) * delta[a];
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (hess(a, b) != 0.0)
                expanded += Complex(0.5 * hess(a, b), 0.0) * (delta[a] * delta[b]);
    return expanded;
}

}  // namespace

HamiltonianExpansion expand_hamiltonian(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                        const ExtendedState& s) {
    const GrassmannElement expanded = expand_hamiltonian_element(H, alg, s);
    HamiltonianExpansion out{alg.zero(), alg.zero(), alg.zero(), alg.zero(), alg.zero(), 0.0};
    Components comp = decompose(alg, expanded);
    out.h0 = std::move(comp.theta0);
    out.theta_comp = std::move(comp.theta_comp);
    out.thetabar_comp = std::move(comp.thetabar_comp);
    out.top_comp = std::move(comp.top);
    out.h_tilde = lie_derivative_element(H, alg, s);
    out.identity_residual = relative_residual(out.top_comp, kI * out.h_tilde);
    return out;
}

namespace {

GrassmannElement ghost_c(const CpiAlgebra& alg, const ExtendedState& s, int a) {
    return GrassmannElement::monomial(alg.gens, Mask{1} << alg.c_index(a), Complex(s.c[a], 0.0));
}
GrassmannElement ghost_cbar(const CpiAlgebra& alg, const ExtendedState& s, int a) {
    return GrassmannElement::monomial(alg.gens, Mask{1} << alg.cbar_index(a),
                                      Complex(s.cbar[a], 0.0));
}

// (lambda_p p + i cbar_p c^p) at one state, the endpoint density of Eq.-style
// surface terms; "p" runs over the momentum half of the multiplet.
GrassmannElement surface_density(const CpiAlgebra& alg, const ExtendedState& s) {
    const int n = alg.dof;
    GrassmannElement out = alg.zero();
    Complex lam{0.0, 0.0};
    for (int j = 0; j < n; ++j) lam += s.lambda[n + j] * s.phi[n + j];
    out += alg.scalar(lam);
    for (int j = 0; j < n; ++j)
        out += kI * (ghost_cbar(alg, s, n + j) * ghost_c(alg, s, n + j));
    return out;
}

}  // namespace

SuperActionResult discretized_superaction(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                          std::span<const ExtendedState> path, double dt) {
    if (path.size() < 2)
        throw std::invalid_argument("discretized_superaction: path needs at least 2 states");
    if (dt < 0.0) throw std::invalid_argument("discretized_superaction: dt must be >= 0");
    const int n = alg.dof;
    const int d = 2 * n;

    std::vector<std::vector<GrassmannElement>> phi_elems;  // [k][a]
    phi_elems.reserve(path.size());
    for (const auto& s : path) {
        const auto fields = superfields_from_state(alg, s);
        std::vector<GrassmannElement> elems;
        elems.reserve(d);
        for (const auto& f : fields) elems.push_back(f.element(alg));
        phi_elems.push_back(std::move(elems));
    }

    GrassmannElement total = alg.zero();
    std::vector<SuperActionSlice> slice_parts;
    slice_parts.reserve(path.size() - 1);
    double s_phi = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        // Phi^p_k * (Phi^q_{k+1} - Phi^q_k), summed over the index pairs in
        // ascending j, then minus H(Phi_k) dt. The scalar accumulator below
        // repeats the theta^0 coefficient of exactly these operations in
        // exactly this order, so the two agree bit for bit.
        GrassmannElement slice = alg.zero();
        for (int j = 0; j < n; ++j)
            slice += phi_elems[k][n + j] * (phi_elems[k + 1][j] - phi_elems[k][j]);
        slice -= expand_hamiltonian_element(H, alg, path[k]) * Complex(dt, 0.0);
        total += slice;
        Components sc = decompose(alg, slice);
        slice_parts.push_back({std::move(sc.theta0), std::move(sc.theta_comp),
                               std::move(sc.thetabar_comp), std::move(sc.top)});

        double t = 0.0;
        for (int j = 0; j < n; ++j)
            t += path[k].phi[n + j] * (path[k + 1].phi[j] - path[k].phi[j]);
        t -= H.value(path[k].phi) * dt;
        s_phi += t;
    }

    SuperActionResult out{alg.zero(), alg.zero(), alg.zero(), alg.zero(), alg.zero(),
                          alg.zero(), alg.zero(), {}, 0.0, 0.0};
    out.slices = std::move(slice_parts);
    Components comp = decompose(alg, total);
    out.total = std::move(total);
    out.theta0 = std::move(comp.theta0);
    out.theta_comp = std::move(comp.theta_comp);
    out.thetabar_comp = std::move(comp.thetabar_comp);
    out.top_comp = std::move(comp.top);
    out.s_phi = s_phi;

    // independent route: extended action with the summation-by-parts slicing
    GrassmannElement s_tilde = alg.zero();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const ExtendedState& a = path[k];
        const ExtendedState& b = path[k + 1];
        Complex lam{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            lam += a.lambda[j] * (b.phi[j] - a.phi[j]);          // lambda_q at k
            lam += b.lambda[n + j] * (b.phi[n + j] - a.phi[n + j]);  // lambda_p at k+1
        }
        GrassmannElement slice = alg.scalar(lam);
        for (int j = 0; j < n; ++j) {
            slice += kI * (ghost_cbar(alg, a, j) * (ghost_c(alg, b, j) - ghost_c(alg, a, j)));
            slice += kI * (ghost_cbar(alg, b, n + j) *
                           (ghost_c(alg, b, n + j) - ghost_c(alg, a, n + j)));
        }
        slice -= lie_derivative_element(H, alg, a) * Complex(dt, 0.0);
        s_tilde += slice;
    }
    out.s_tilde = std::move(s_tilde);
    out.surface_term = surface_density(alg, path.back()) - surface_density(alg, path.front());
    out.identity_residual =
        relative_residual(out.top_comp, kI * (out.s_tilde - out.surface_term));
    return out;
}

SuperActionResult momentum_superaction(const PolynomialHamiltonian& H, const CpiAlgebra& alg,
                                       std::span<const ExtendedState> path, double dt) {
    if (path.size() < 2)
        throw std::invalid_argument("momentum_superaction: path needs at least 2 states");
    if (dt < 0.0) throw std::invalid_argument("momentum_superaction: dt must be >= 0");
    const int n = alg.dof;
    const int d = 2 * n;

    std::vector<std::vector<GrassmannElement>> phi_elems;
    phi_elems.reserve(path.size());
    for (const auto& s : path) {
        const auto fields = superfields_from_state(alg, s);
        std::vector<GrassmannElement> elems;
        elems.reserve(d);
        for (const auto& f : fields) elems.push_back(f.element(alg));
        phi_elems.push_back(std::move(elems));
    }

    GrassmannElement total = alg.zero();
    std::vector<SuperActionSlice> slice_parts;
    slice_parts.reserve(path.size() - 1);
    double s_phi = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        GrassmannElement slice = alg.zero();
        for (int j = 0; j < n; ++j)
            slice -= phi_elems[k][j] * (phi_elems[k + 1][n + j] - phi_elems[k][n + j]);
        slice -= expand_hamiltonian_element(H, alg, path[k]) * Complex(dt, 0.0);
        total += slice;
        Components sc = decompose(alg, slice);
        slice_parts.push_back({std::move(sc.theta0), std::move(sc.theta_comp),
                               std::move(sc.thetabar_comp), std::move(sc.top)});

        double t = 0.0;
        for (int j = 0; j < n; ++j)
            t -= path[k].phi[j] * (path[k + 1].phi[n + j] - path[k].phi[n + j]);
        t -= H.value(path[k].phi) * dt;
        s_phi += t;
    }

    SuperActionResult out{alg.zero(), alg.zero(), alg.zero(), alg.zero(), alg.zero(),
                          alg.zero(), alg.zero(), {}, 0.0, 0.0};
    out.slices = std::move(slice_parts);
    Components comp = decompose(alg, total);
    out.total = std::move(total);
    out.theta0 = std::move(comp.theta0);
    out.theta_comp = std::move(comp.theta_comp);
    out.thetabar_comp = std::move(comp.thetabar_comp);
    out.top_comp = std::move(comp.top);
    out.s_phi = s_phi;

    // direct left-point discretization of the momentum-representation
    // integrand lambda_p pdot - q lambdadot_q + i c^q cbardot_q
    //           + i cbar_p cdot^p - Htilde; no surface term arises here
    GrassmannElement bracket = alg.zero();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const ExtendedState& a = path[k];
        const ExtendedState& b = path[k + 1];
        Complex lam{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            lam += a.lambda[n + j] * (b.phi[n + j] - a.phi[n + j]);
            lam -= a.phi[j] * (b.lambda[j] - a.lambda[j]);
        }
        GrassmannElement slice = alg.scalar(lam);
        for (int j = 0; j < n; ++j) {
            slice += kI * (ghost_c(alg, a, j) * (ghost_cbar(alg, b, j) - ghost_cbar(alg, a, j)));
            slice += kI * (ghost_cbar(alg, a, n + j) *
                           (ghost_c(alg, b, n + j) - ghost_c(alg, a, n + j)));
        }
        slice -= lie_derivative_element(H, alg, a) * Complex(dt, 0.0);
        bracket += slice;
    }
    out.s_tilde = std::move(bracket);
    out.surface_term = alg.zero();
    out.identity_residual =
        relative_residual(out.top_comp, kI * (out.s_tilde - out.surface_term));
    return out;
}

BerezinBridge berezin_bridge(const CpiAlgebra& alg, const GrassmannElement& s_super) {
    BerezinBridge out{alg.zero(), Complex(0.0, 0.0)};
    const std::size_t vars[2] = {alg.theta(), alg.thetabar()};
    out.classical_weight = kI * berezin(s_super, std::span<const std::size_t>(vars));
    out.quantum_weight = restrict_away(s_super, alg.theta_mask() | alg.thetabar_mask())
                             .coefficient(0);
    return out;
}

double freeze(const CpiAlgebra& alg, const GrassmannElement& s_super, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("freeze: Delta must be > 0");
    const Complex s0 =
        restrict_away(s_super, alg.theta_mask() | alg.thetabar_mask()).coefficient(0);
    return s0.real() / delta;
}

}  // namespace kvn
