#ifndef KVNCPI_RANDOMIZED_HPP
#define KVNCPI_RANDOMIZED_HPP

#include <random>
#include <vector>

#include "kvn/extended_state.hpp"
#include "kvn/phase_space.hpp"

namespace kvn {

/// Random polynomial Hamiltonian for the identity suites: a handful of
/// monomials of total degree <= max_degree with coefficients in [-2, 2].
PolynomialHamiltonian random_polynomial_hamiltonian(int dof, int max_degree,
                                                    std::mt19937_64& rng);

/// Random multiplet values in [-2, 2]; lambda gets an imaginary part when
/// complex_lambda is set.
ExtendedState random_extended_state(int dof, std::mt19937_64& rng, bool complex_lambda = false);

std::vector<ExtendedState> random_extended_path(int dof, int nstates, std::mt19937_64& rng);

}  // namespace kvn

#endif
