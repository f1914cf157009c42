#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "kvn/kvn_evolve.hpp"
#include "kvn/propagator.hpp"
#include "kvn/superfield.hpp"

using namespace kvn;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

const SpatialGrid1D kGrid{-20.0, 20.0, 1024};

std::vector<GaussianPacket> test_packets() {
    return {{0.0, 1.0, 0.0}, {1.0, 1.0, 2.0}, {-2.0, 0.7, -1.0}};
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_CASE("free-particle kernel matches the closed form on packets") {
    const auto h = PolynomialHamiltonian::free_particle();
    const auto prop = position_propagator(h, kGrid, 1.0, {256, Splitting::strang}, 1.0);
    const auto pk = test_packets();
    const double err = packet_oracle_error(prop, pk, [&](const GaussianPacket& p) {
        return free_kernel_action(kGrid, 1.0, p, 1.0, 1.0);
    });
    CHECK(err <= 1e-6);
}

TEST_CASE("harmonic kernel matches the Mehler form on packets") {
    const auto h = PolynomialHamiltonian::harmonic();
    const double T = M_PI / 4.0;
    const auto prop = position_propagator(h, kGrid, T, {256, Splitting::strang}, 1.0);
    const auto pk = test_packets();
    const double err = packet_oracle_error(prop, pk, [&](const GaussianPacket& p) {
        return mehler_kernel_action(kGrid, T, p, 1.0);
    });
    CHECK(err <= 1e-5);
}

TEST_CASE("trotter error drops fourfold under slice doubling") {
    const auto h = PolynomialHamiltonian::harmonic();
    const double T = M_PI / 4.0;
    const auto pk = test_packets();
    auto err_at = [&](int slices) {
        const auto prop = position_propagator(h, kGrid, T, {slices, Splitting::strang}, 1.0);
        return packet_oracle_error(prop, pk, [&](const GaussianPacket& p) {
            return mehler_kernel_action(kGrid, T, p, 1.0);
        });
    };
    const double e64 = err_at(64), e128 = err_at(128), e256 = err_at(256);
    CHECK(e64 / e128 > 3.5);
    CHECK(e64 / e128 < 4.5);
    CHECK(e128 / e256 > 3.5);
    CHECK(e128 / e256 < 4.5);
}

TEST_CASE("short-time kernel concentrates on the diagonal") {
    const auto h = PolynomialHamiltonian::harmonic();
    const SpatialGrid1D small{-10.0, 10.0, 64};
    const auto prop = position_propagator(h, small, 1e-7, {1, Splitting::strang}, 1.0);
    const Eigen::MatrixXcd k = prop.materialize();
    double off = 0.0, on = 0.0;
    for (int f = 0; f < small.n; ++f)
        for (int i = 0; i < small.n; ++i)
            (f == i ? on : off) += std::norm(k(f, i));
    CHECK(off / on < 1e-8);
}

TEST_CASE("momentum kernel of free motion is diagonal with the exact phase") {
    const auto h = PolynomialHamiltonian::free_particle();
    const SpatialGrid1D g{-20.0, 20.0, 256};
    const double T = 1.0;
    const auto prop = momentum_propagator(h, g, T, {16, Splitting::strang}, 1.0);
    for (int j : {0, 1, 77, 200}) {
        VectorXcd e = VectorXcd::Zero(g.n);
        e[j] = 1.0;
        const VectorXcd col = prop.apply(e);
        const double p = g.momentum(j, 1.0);
        // column concentrates on its own bin
        for (int m = 0; m < g.n; ++m)
            if (m != j) CHECK(std::abs(col[m]) == 0.0);
        const std::complex<double> want =
            std::exp(std::complex<double>(0.0, -p * p * T / 2.0));
        CHECK(std::abs(col[j] - want) < 1e-12);
    }
}

TEST_CASE("momentum-representation harmonic kernel matches its Mehler form") {
    const auto h = PolynomialHamiltonian::harmonic();
    const double T = M_PI / 2.0;  // self-dual point: the kernel maps onto the position Mehler form
    const auto prop = momentum_propagator(h, kGrid, T, {512, Splitting::strang}, 1.0);
    const auto pk = test_packets();
    const double err = packet_oracle_error(prop, pk, [&](const GaussianPacket& p) {
        return mehler_momentum_kernel_action(kGrid, T, p, 1.0);
    });
    CHECK(err <= 1e-5);
}

TEST_CASE("delta scaling halves every sliced phase bitwise") {
    const auto h = PolynomialHamiltonian::quartic(0.7);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<VectorXd> path;
    for (int k = 0; k < 9; ++k) {
        VectorXd s(2);
        s << u(rng), u(rng);
        path.push_back(s);
    }
    const auto p1 = sliced_phases(h, path, 0.1, 1.0);
    const auto p2 = sliced_phases(h, path, 0.1, 2.0);
    REQUIRE(p1.size() == p2.size());
    for (std::size_t k = 0; k < p1.size(); ++k) CHECK(same_bits(p2[k], p1[k] / 2.0));
}

TEST_CASE("sliced action is the theta,thetabar -> 0 restriction, bit for bit") {
    const auto h = PolynomialHamiltonian::harmonic();
    const CpiAlgebra alg = CpiAlgebra::make(1);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int it = 0; it < 50; ++it) {
        const int nstates = 3 + static_cast<int>(rng() % 6);
        std::vector<VectorXd> path;
        std::vector<ExtendedState> states;
        for (int k = 0; k < nstates; ++k) {
            VectorXd s(2);
            s << u(rng), u(rng);
            path.push_back(s);
            ExtendedState es = ExtendedState::zeros(1);
            es.phi = s;
            es.lambda << std::complex<double>(u(rng), 0.0), std::complex<double>(u(rng), 0.0);
            es.c << u(rng), u(rng);
            es.cbar << u(rng), u(rng);
            states.push_back(es);
        }
        const double dt = 0.25;
        const double acc = sliced_action(h, path, dt);
        const auto super = discretized_superaction(h, alg, states, dt);
        const std::complex<double> s0 = super.theta0.coefficient(0);
        CHECK(s0.imag() == 0.0);
        CHECK(s0.real() == acc);
        if (acc != 0.0) CHECK(same_bits(s0.real(), acc));
    }
}

TEST_CASE("fourier duality of the two representations") {
    const auto pk = test_packets();
    {
        const auto h = PolynomialHamiltonian::free_particle();
        const auto pos = position_propagator(h, kGrid, 1.0, {256, Splitting::strang}, 1.0);
        const auto mom = momentum_propagator(h, kGrid, 1.0, {256, Splitting::strang}, 1.0);
        CHECK(fourier_duality_residual(pos, mom, pk) <= 1e-5);
    }
    {
        const auto h = PolynomialHamiltonian::harmonic();
        const double T = M_PI / 4.0;
        const auto pos = position_propagator(h, kGrid, T, {256, Splitting::strang}, 1.0);
        const auto mom = momentum_propagator(h, kGrid, T, {256, Splitting::strang}, 1.0);
        CHECK(fourier_duality_residual(pos, mom, pk) <= 1e-4);
    }
    {
        // T = 0: both sides are the identity
        const auto h = PolynomialHamiltonian::harmonic();
        const auto pos = position_propagator(h, kGrid, 0.0, {1, Splitting::strang}, 1.0);
        const auto mom = momentum_propagator(h, kGrid, 0.0, {1, Splitting::strang}, 1.0);
        CHECK(fourier_duality_residual(pos, mom, pk) == 0.0);
    }
}

TEST_CASE("grid transforms invert each other and preserve the norm") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const SpatialGrid1D g{-15.0, 15.0, 128};
    VectorXcd psi(g.n);
    for (int j = 0; j < g.n; ++j) psi[j] = std::complex<double>(u(rng), u(rng));
    const double delta = 0.7;
    const VectorXcd phi = to_momentum_rep(g, delta, psi);
    const VectorXcd back = to_position_rep(g, delta, phi);
    CHECK((back - psi).norm() < 1e-12 * psi.norm());
    const double dp = 2.0 * M_PI * delta / (g.dx() * g.n);
    CHECK(phi.squaredNorm() * dp == doctest::Approx(psi.squaredNorm() * g.dx()).epsilon(1e-12));
}

TEST_CASE("unitarity and composition of the sliced kernel") {
    const auto h = PolynomialHamiltonian::quartic(0.3);
    const SpatialGrid1D g{-20.0, 20.0, 512};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXcd v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = std::complex<double>(u(rng), u(rng));

    const auto k1 = position_propagator(h, g, 1.0, {100, Splitting::strang}, 1.0);
    CHECK(std::fabs(k1.apply(v).norm() - v.norm()) < 1e-10 * v.norm());

    const auto ka = position_propagator(h, g, 0.4, {40, Splitting::strang}, 1.0);
    const auto kb = position_propagator(h, g, 0.6, {60, Splitting::strang}, 1.0);
    const VectorXcd composed = kb.apply(ka.apply(v));
    const VectorXcd direct = k1.apply(v);
    CHECK((composed - direct).norm() <= 1e-4 * direct.norm());
}

TEST_CASE("materialized kernel columns are bitwise identical serial vs parallel") {
    const auto h = PolynomialHamiltonian::harmonic();
    const SpatialGrid1D g{-10.0, 10.0, 128};
    const auto prop = position_propagator(h, g, 0.5, {32, Splitting::strang}, 1.0);
    const Eigen::MatrixXcd a = prop.materialize(true);
    const Eigen::MatrixXcd b = prop.materialize(false);
    CHECK(std::memcmp(a.data(), b.data(), sizeof(std::complex<double>) * a.size()) == 0);
}

TEST_CASE("lattice path sum equals the transfer-matrix kernel") {
    {
        const auto h = PolynomialHamiltonian::free_particle();
        BridgeSpec spec;
        spec.points = 7;
        spec.slices = 3;
        const auto rep = bridge_demonstration(h, spec);
        CHECK(rep.paths == 49);
        CHECK(rep.rel_error < 1e-13);
    }
    {
        const auto h = PolynomialHamiltonian::harmonic();
        BridgeSpec spec;
        spec.points = 9;
        spec.slices = 4;
        const auto rep = bridge_demonstration(h, spec);
        CHECK(rep.paths == 729);
        CHECK(rep.rel_error < 1e-10);
    }
    {
        // single slice: both sides are the bare momentum sum
        const auto h = PolynomialHamiltonian::harmonic();
        BridgeSpec spec;
        spec.points = 5;
        spec.slices = 1;
        const auto rep = bridge_demonstration(h, spec);
        CHECK(rep.rel_error < 1e-15);
    }
    {
        const auto h = PolynomialHamiltonian::harmonic();
        BridgeSpec spec;
        spec.points = 9;
        spec.slices = 9;
        CHECK_THROWS_AS(bridge_demonstration(h, spec), std::invalid_argument);
    }
}

TEST_CASE("quantum spreading vs classical KvN transport of |psi|^2") {
    // free particle, Delta = 1, packet width 1: quantum q-variance grows as
    // 1/2 + t^2/2; a KvN density with matching p-spread reproduces it, a
    // p-narrow KvN density does not spread
    const auto h = PolynomialHamiltonian::free_particle();
    const double T = 1.0;

    const auto prop = position_propagator(h, kGrid, T, {128, Splitting::strang}, 1.0);
    const GaussianPacket pkt{0.0, 1.0, 0.0};
    const double var_q = position_variance(kGrid, prop.apply(packet_values(kGrid, pkt)));
    CHECK(var_q == doctest::Approx(1.0).epsilon(1e-3));

    PhaseGrid pg{-8.0, 8.0, -8.0, 8.0, 256, 256};
    auto marginal_variance = [&](const KvNWave& w) {
        double mass = 0.0, mean = 0.0;
        for (int i = 0; i < pg.nq; ++i)
            for (int j = 0; j < pg.np; ++j) {
                const double m = std::norm(w.values[pg.index(i, j)]);
                mass += m;
                mean += m * pg.q(i);
            }
        mean /= mass;
        double var = 0.0;
        for (int i = 0; i < pg.nq; ++i)
            for (int j = 0; j < pg.np; ++j)
                var += std::norm(w.values[pg.index(i, j)]) * (pg.q(i) - mean) * (pg.q(i) - mean);
        return var / mass;
    };

    const auto matched = KvNWave::gaussian2(pg, 0.0, 0.0, 1.0, 1.0);
    const auto narrow = KvNWave::gaussian2(pg, 0.0, 0.0, 1.0, 0.1);
    const double var_matched =
        marginal_variance(evolve_kvn_characteristics(h, matched, T).wave);
    const double var_narrow =
        marginal_variance(evolve_kvn_characteristics(h, narrow, T).wave);

    CHECK(var_matched == doctest::Approx(var_q).epsilon(1e-2));
    CHECK(var_narrow < 0.55);  // 0.5 + T^2 * 0.01/2, far below the quantum value
}

TEST_CASE("propagator input validation") {
    Polynomial mixed(2);
    mixed.add_term({1, 1}, 1.0);
    const PolynomialHamiltonian bad(1, mixed);
    CHECK_THROWS_AS(position_propagator(bad, kGrid, 1.0, {8, Splitting::strang}, 1.0),
                    std::invalid_argument);
    const auto h = PolynomialHamiltonian::harmonic();
    CHECK_THROWS_AS(position_propagator(h, kGrid, 1.0, {8, Splitting::strang}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(position_propagator(h, kGrid, 1.0, {0, Splitting::strang}, 1.0),
                    std::invalid_argument);
}
