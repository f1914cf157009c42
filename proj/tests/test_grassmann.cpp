#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kvn/grassmann.hpp"

using namespace kvn;

namespace {

GeneratorSetPtr two_thetas() {
    return std::make_shared<const GeneratorSet>(std::vector<std::string>{"theta", "thetabar"});
}

GeneratorSetPtr small_algebra() {
    // theta, thetabar plus one ghost pair
    return std::make_shared<const GeneratorSet>(
        std::vector<std::string>{"theta", "thetabar", "c1", "cb1"});
}

GrassmannElement random_element(const GeneratorSetPtr& gens, std::mt19937_64& rng,
                                int max_terms = 6) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<Mask> mask(0, (Mask{1} << gens->size()) - 1);
    GrassmannElement e = GrassmannElement::zero(gens);
    const int nterms = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
    for (int t = 0; t < nterms; ++t)
        e += GrassmannElement::monomial(gens, mask(rng), {coeff(rng), coeff(rng)});
    return e;
}

GrassmannElement random_homogeneous(const GeneratorSetPtr& gens, std::mt19937_64& rng,
                                    int degree) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    GrassmannElement e = GrassmannElement::zero(gens);
    const Mask full = (Mask{1} << gens->size()) - 1;
    for (Mask m = 0; m <= full; ++m)
        if (std::popcount(m) == degree && (rng() & 1))
            e += GrassmannElement::monomial(gens, m, {coeff(rng), coeff(rng)});
    return e;
}

}  // namespace

TEST_CASE("generator set rejects duplicates and overlong lists") {
    CHECK_THROWS_AS(GeneratorSet({"a", "a"}), std::invalid_argument);
    std::vector<std::string> many;
    for (int i = 0; i < 65; ++i) many.push_back("g" + std::to_string(i));
    auto make_overlong = [&] { return GeneratorSet(many); };
    CHECK_THROWS_AS(make_overlong(), std::invalid_argument);
}

TEST_CASE("nilpotency and anticommutation of single generators") {
    auto g = two_thetas();
    const auto theta = GrassmannElement::generator(g, 0);
    const auto thetabar = GrassmannElement::generator(g, 1);

    CHECK((theta * theta).is_zero());

    const auto tt = theta * thetabar;
    const auto tt_rev = thetabar * theta;
    CHECK(tt.coefficient(0b11) == Complex(1.0, 0.0));
    CHECK(tt_rev.coefficient(0b11) == Complex(-1.0, 0.0));
    CHECK((tt + tt_rev).is_zero());
}

TEST_CASE("four-generator product expands with canonical signs") {
    // (1 + theta c1)(1 + thetabar cb1)
    //   = 1 + theta c1 + thetabar cb1 + theta c1 thetabar cb1
    // and c1 thetabar = -thetabar c1 flips the last sign once.
    auto g = small_algebra();
    const auto one = GrassmannElement::scalar(g, 1.0);
    const auto theta = GrassmannElement::generator(g, 0);
    const auto thetabar = GrassmannElement::generator(g, 1);
    const auto c1 = GrassmannElement::generator(g, 2);
    const auto cb1 = GrassmannElement::generator(g, 3);

    const auto prod = (one + theta * c1) * (one + thetabar * cb1);
    CHECK(prod.coefficient(0b0000) == Complex(1.0, 0.0));
    CHECK(prod.coefficient(0b0101) == Complex(1.0, 0.0));   // theta c1
    CHECK(prod.coefficient(0b1010) == Complex(1.0, 0.0));   // thetabar cb1
    CHECK(prod.coefficient(0b1111) == Complex(-1.0, 0.0));  // theta thetabar c1 cb1
}

TEST_CASE("berezin conventions") {
    auto g = two_thetas();
    const auto theta = GrassmannElement::generator(g, 0);
    const auto thetabar = GrassmannElement::generator(g, 1);

    // int dtheta dthetabar (thetabar theta) = 1 (inner integral first)
    const auto v = berezin(thetabar * theta, {0, 1});
    CHECK(v.coefficient(0) == Complex(1.0, 0.0));
    CHECK(v.grades() == std::set<int>{0});

    // constants integrate to zero
    CHECK(berezin(GrassmannElement::scalar(g, 42.0), {0, 1}).is_zero());

    // i int dtheta dthetabar (i theta thetabar X) = X for a theta-free even X
    auto ga = small_algebra();
    const auto th = GrassmannElement::generator(ga, 0);
    const auto tb = GrassmannElement::generator(ga, 1);
    const auto x = GrassmannElement::scalar(ga, {1.25, -0.5}) +
                   GrassmannElement::monomial(ga, 0b1100, {0.0, 2.0});
    const Complex i{0.0, 1.0};
    const auto lhs = i * berezin(i * (th * tb * x), {0, 1});
    CHECK(lhs == x);

    CHECK_THROWS_AS(berezin(th, {0, 0}), std::invalid_argument);
}

TEST_CASE("left derivatives") {
    auto g = two_thetas();
    const auto theta = GrassmannElement::generator(g, 0);
    const auto thetabar = GrassmannElement::generator(g, 1);
    const auto tt = theta * thetabar;

    CHECK(left_derivative(tt, 0) == thetabar);
    CHECK(left_derivative(tt, 1) == -theta);
    CHECK(left_derivative(GrassmannElement::scalar(g, 1.0), 0).is_zero());

    // berezin of a single variable equals the left derivative (the fixed
    // sign convention of this algebra)
    std::mt19937_64 rng(7);
    auto ga = small_algebra();
    for (int it = 0; it < 50; ++it) {
        const auto a = random_element(ga, rng);
        CHECK(berezin(a, {0}) == left_derivative(a, 0));
    }
}

TEST_CASE("grading") {
    auto g = small_algebra();
    CHECK(GrassmannElement::zero(g).grades().empty());
    const auto theta = GrassmannElement::generator(g, 0);
    const auto thetabar = GrassmannElement::generator(g, 1);
    const auto c1 = GrassmannElement::generator(g, 2);
    CHECK((theta * thetabar).grades() == std::set<int>{2});
    CHECK((GrassmannElement::scalar(g, 1.0) + theta * c1).grades() == std::set<int>{0, 2});
}

TEST_CASE("associativity and distributivity on random elements") {
    auto gens = std::make_shared<const GeneratorSet>(std::vector<std::string>{
        "g0", "g1", "g2", "g3", "g4", "g5", "g6", "g7"});
    std::mt19937_64 rng(123);
    for (int it = 0; it < 200; ++it) {
        const auto a = random_element(gens, rng);
        const auto b = random_element(gens, rng);
        const auto c = random_element(gens, rng);
        const auto assoc = (a * b) * c - a * (b * c);
        CHECK(assoc.norm() <= 1e-12 * (1.0 + a.norm() * b.norm() * c.norm()));
        const auto dist = a * (b + c) - (a * b + a * c);
        CHECK(dist.norm() <= 1e-12 * (1.0 + a.norm() * (b.norm() + c.norm())));
    }
}

TEST_CASE("graded commutativity and odd nilpotency") {
    auto gens = std::make_shared<const GeneratorSet>(
        std::vector<std::string>{"g0", "g1", "g2", "g3", "g4", "g5"});
    std::mt19937_64 rng(321);
    for (int it = 0; it < 100; ++it) {
        const int p = static_cast<int>(rng() % 4);
        const int q = static_cast<int>(rng() % 4);
        const auto a = random_homogeneous(gens, rng, p);
        const auto b = random_homogeneous(gens, rng, q);
        const double sign = ((p * q) % 2 == 0) ? 1.0 : -1.0;
        const auto comm = a * b - Complex(sign, 0.0) * (b * a);
        CHECK(comm.norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));
    }
    for (int deg : {1, 3}) {
        for (int it = 0; it < 50; ++it) {
            const auto a = random_homogeneous(gens, rng, deg);
            CHECK((a * a).norm() <= 1e-12 * (1.0 + a.norm() * a.norm()));
        }
    }
}

TEST_CASE("berezin translation invariance") {
    // int dtheta f(theta + eta) = int dtheta f(theta) for odd theta-free eta
    auto gens = small_algebra();
    std::mt19937_64 rng(99);
    for (int it = 0; it < 100; ++it) {
        const auto f = random_element(gens, rng);
        // eta: random odd combination of thetabar, c1, cb1
        std::uniform_real_distribution<double> coeff(-2.0, 2.0);
        GrassmannElement eta = GrassmannElement::zero(gens);
        for (std::size_t gidx : {1u, 2u, 3u})
            eta += Complex(coeff(rng), coeff(rng)) * GrassmannElement::generator(gens, gidx);

        const auto f1 = left_derivative(f, 0);  // theta-coefficient
        const auto theta = GrassmannElement::generator(gens, 0);
        const auto f0 = f - theta * f1;
        const auto shifted = f0 + (theta + eta) * f1;
        const auto lhs = berezin(shifted, {0});
        const auto rhs = berezin(f, {0});
        CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("mismatched generator sets are a contract violation") {
    auto a = two_thetas();
    auto b = small_algebra();
    const auto ea = GrassmannElement::generator(a, 0);
    const auto eb = GrassmannElement::generator(b, 0);
    CHECK_THROWS_AS(ea * eb, std::invalid_argument);
}

TEST_CASE("deterministic text rendering") {
    auto g = small_algebra();
    const auto e = GrassmannElement::scalar(g, {1.0, 0.0}) +
                   GrassmannElement::monomial(g, 0b0101, {-0.5, 0.25});
    CHECK(e.str() == "(1+0i) * 1\n(-0.5+0.25i) * theta c1");
    CHECK(GrassmannElement::zero(g).str() == "0");
}
