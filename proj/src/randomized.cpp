#include "kvn/randomized.hpp"

namespace kvn {

PolynomialHamiltonian random_polynomial_hamiltonian(int dof, int max_degree,
                                                    std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    Polynomial h(2 * dof);
    const int nterms = 2 + static_cast<int>(rng() % 6);
    for (int t = 0; t < nterms; ++t) {
        std::vector<int> exps(2 * static_cast<std::size_t>(dof), 0);
        int budget = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_degree));
        while (budget > 0) {
            const std::size_t var = rng() % exps.size();
            const int use = 1 + static_cast<int>(rng() % static_cast<unsigned>(budget));
            exps[var] += use;
            budget -= use;
            if (rng() & 1) break;
        }
        h.add_term(exps, coeff(rng));
    }
    if (h.empty()) h.add_term(std::vector<int>(2 * static_cast<std::size_t>(dof), 0), 1.0);
    return {dof, h};
}

ExtendedState random_extended_state(int dof, std::mt19937_64& rng, bool complex_lambda) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    ExtendedState s = ExtendedState::zeros(dof);
    for (int a = 0; a < 2 * dof; ++a) {
        s.phi[a] = u(rng);
        s.c[a] = u(rng);
        s.cbar[a] = u(rng);
        s.lambda[a] = std::complex<double>(u(rng), complex_lambda ? u(rng) : 0.0);
    }
    return s;
}

std::vector<ExtendedState> random_extended_path(int dof, int nstates, std::mt19937_64& rng) {
    std::vector<ExtendedState> path;
    path.reserve(static_cast<std::size_t>(nstates));
    for (int k = 0; k < nstates; ++k) path.push_back(random_extended_state(dof, rng));
    return path;
}

}  // namespace kvn
