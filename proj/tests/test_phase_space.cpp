#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kvn/phase_space.hpp"

using namespace kvn;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

TEST_CASE("polynomial evaluation and structural derivatives") {
    Polynomial h(2);
    h.add_term({2, 0}, 0.5);
    h.add_term({0, 2}, 0.5);
    h.add_term({4, 0}, 0.25);
    const double x[2] = {2.0, 3.0};
    CHECK(h.eval({x, 2}) == doctest::Approx(0.5 * 4 + 0.5 * 9 + 0.25 * 16).epsilon(1e-15));
    CHECK(h.degree() == 4);

    const Polynomial dq = h.derivative(0);
    CHECK(dq.eval({x, 2}) == doctest::Approx(2.0 + 8.0).epsilon(1e-15));

    // third and higher derivatives of a quadratic vanish identically
    const PolynomialHamiltonian quad = PolynomialHamiltonian::harmonic();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                Vector2d phi(0.7, -1.3);
                CHECK(quad.third(a, b, c, phi) == 0.0);
            }
}

TEST_CASE("hamiltonian vector field examples") {
    const auto harmonic = PolynomialHamiltonian::harmonic();
    Vector2d phi(1.0, 0.0);
    VectorXd f = harmonic.vector_field(phi);
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(-1.0));

    const auto free = PolynomialHamiltonian::free_particle();
    Vector2d phi2(3.7, 2.5);
    f = free.vector_field(phi2);
    CHECK(f[0] == doctest::Approx(2.5));
    CHECK(f[1] == doctest::Approx(0.0));

    const auto quartic = PolynomialHamiltonian::quartic(1.0);
    f = quartic.vector_field(phi);
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(-2.0));  // dH/dq = q + q^3 = 2 at q=1
}

TEST_CASE("harmonic flow reaches the quarter-period rotation") {
    const auto h = PolynomialHamiltonian::harmonic();
    Vector2d phi0(1.0, 0.0);
    const auto traj = integrate_flow(h, phi0, M_PI / 2.0, 1e-3, true, 1 << 30);
    const VectorXd end = traj.final_state();
    CHECK(std::fabs(end[0] - 0.0) < 1e-8);
    CHECK(std::fabs(end[1] - (-1.0)) < 1e-8);

    // closed-form monodromy of the rotation: [[cos T, sin T], [-sin T, cos T]]
    const MatrixXd m = traj.final_tangent();
    const double ct = std::cos(M_PI / 2.0), st = std::sin(M_PI / 2.0);
    CHECK(std::fabs(m(0, 0) - ct) < 1e-8);
    CHECK(std::fabs(m(0, 1) - st) < 1e-8);
    CHECK(std::fabs(m(1, 0) + st) < 1e-8);
    CHECK(std::fabs(m(1, 1) - ct) < 1e-8);
}

TEST_CASE("free flow is exact linear motion") {
    const auto h = PolynomialHamiltonian::free_particle();
    Vector2d phi0(0.0, 1.0);
    const auto traj = integrate_flow(h, phi0, 2.0, 1e-2);
    CHECK(traj.final_state()[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(traj.final_state()[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("finite-difference jacobian agrees with the co-integrated tangent") {
    const auto harmonic = PolynomialHamiltonian::harmonic();
    Vector2d phi0(1.0, 0.0);
    {
        const MatrixXd m = integrate_flow(harmonic, phi0, 1.0, 1e-3, true, 1 << 30).final_tangent();
        const MatrixXd fd = finite_difference_jacobian(harmonic, phi0, 1.0, 1e-3, 1e-5);
        CHECK((m - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
    {
        const auto free = PolynomialHamiltonian::free_particle();
        const MatrixXd fd = finite_difference_jacobian(free, phi0, 3.0, 1e-2, 1e-5);
        MatrixXd want(2, 2);
        want << 1.0, 3.0, 0.0, 1.0;
        CHECK((fd - want).cwiseAbs().maxCoeff() < 1e-9);
    }
    {
        const auto quartic = PolynomialHamiltonian::quartic(1.0);
        const MatrixXd m = integrate_flow(quartic, phi0, 1.0, 1e-3, true, 1 << 30).final_tangent();
        const MatrixXd fd = finite_difference_jacobian(quartic, phi0, 1.0, 1e-3, 1e-5);
        CHECK((m - fd).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("energy conservation improves by ~16 under dt halving") {
    const auto quartic = PolynomialHamiltonian::quartic(1.0);
    Vector2d phi0(1.2, 0.3);
    const double e0 = quartic.value(phi0);
    // max drift along the trajectory; the endpoint value alone oscillates
    // through zero and hides the dt^4 scaling
    auto drift = [&](double dt) {
        const auto traj = integrate_flow(quartic, phi0, 5.0, dt, false, 10);
        double worst = 0.0;
        for (const auto& s : traj.states)
            worst = std::max(worst, std::fabs(quartic.value(s) - e0));
        return worst;
    };
    const double d1 = drift(4e-3);
    const double d2 = drift(2e-3);
    CHECK(d1 / d2 > 12.0);
    CHECK(d1 / d2 < 20.0);
}

TEST_CASE("tangent map is symplectic with unit determinant") {
    for (const auto& h : {PolynomialHamiltonian::harmonic(), PolynomialHamiltonian::quartic(0.8),
                          PolynomialHamiltonian::free_particle()}) {
        Vector2d phi0(0.9, -0.4);
        const MatrixXd m = integrate_flow(h, phi0, 10.0, 1e-3, true, 1 << 30).final_tangent();
        const MatrixXd omega = h.omega().matrix();
        CHECK((m.transpose() * omega * m - omega).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(std::fabs(m.determinant() - 1.0) < 1e-6);
    }
}

TEST_CASE("leapfrog cross-checks rk4 on separable systems") {
    const auto quartic = PolynomialHamiltonian::quartic(1.0);
    Vector2d phi0(1.0, 0.2);
    const auto a = integrate_flow(quartic, phi0, 3.0, 1e-3);
    const auto b = leapfrog_flow(quartic, phi0, 3.0, 1e-4);
    CHECK((a.final_state() - b.final_state()).cwiseAbs().maxCoeff() < 1e-6);

    Polynomial mixed(2);
    mixed.add_term({1, 1}, 1.0);
    CHECK_THROWS_AS(leapfrog_flow(PolynomialHamiltonian(1, mixed), phi0, 1.0, 1e-2),
                    std::invalid_argument);
}

TEST_CASE("flow argument validation") {
    const auto h = PolynomialHamiltonian::harmonic();
    Vector2d phi0(1.0, 0.0);
    CHECK_THROWS_AS(integrate_flow(h, phi0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_flow(h, phi0, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_flow(h, phi0, 1e12, 1e-9), std::overflow_error);
    const auto id = integrate_flow(h, phi0, 0.0, 1e-3, true);
    CHECK(id.final_state() == phi0);
    CHECK(id.final_tangent() == MatrixXd::Identity(2, 2));
}
