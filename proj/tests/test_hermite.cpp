#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asln/hermite.hpp"

#include <cmath>
#include <numbers>

using namespace asln;

TEST_CASE("gauss_hermite integrates low moments exactly") {
    const auto rule = hermite::gauss_hermite(20);
    double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
    for (Index i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes(i), w = rule.weights(i);
        m0 += w;
        m2 += w * x * x;
        m4 += w * x * x * x * x;
        m6 += w * std::pow(x, 6);
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(m6 == doctest::Approx(15.0).epsilon(1e-13));
}

TEST_CASE("hermite_he matches the recurrence basis at sample points") {
    CHECK(hermite::hermite_he(0, 0.7) == doctest::Approx(1.0));
    CHECK(hermite::hermite_he(1, 0.7) == doctest::Approx(0.7));
    CHECK(hermite::hermite_he(2, 0.7) == doctest::Approx(0.7 * 0.7 - 1.0));
    CHECK(hermite::hermite_he(3, 0.7) == doctest::Approx(std::pow(0.7, 3) - 3 * 0.7));
    // He_8(0) = 105, He_10(0) = -945 (double factorial pattern)
    CHECK(hermite::hermite_he(8, 0.0) == doctest::Approx(105.0));
    CHECK(hermite::hermite_he(10, 0.0) == doctest::Approx(-945.0));
}

TEST_CASE("closed-form expectations: sign") {
    const double root = std::sqrt(2.0 / std::numbers::pi);
    CHECK(hermite::expect_he(Nonlinearity::Sign, 1) == doctest::Approx(root).epsilon(1e-13));
    CHECK(hermite::expect_he(Nonlinearity::Sign, 3) == doctest::Approx(-root).epsilon(1e-13));
    CHECK(hermite::expect_sq(Nonlinearity::Sign) == doctest::Approx(1.0).epsilon(1e-13));
    // even-order coefficients vanish for an odd function
    CHECK(hermite::expect_he(Nonlinearity::Sign, 2) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("closed-form expectations: cube, identity, relu") {
    CHECK(hermite::expect_he(Nonlinearity::Cube, 1) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(hermite::expect_he(Nonlinearity::Cube, 3) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(hermite::expect_sq(Nonlinearity::Cube) == doctest::Approx(15.0).epsilon(1e-13));

    CHECK(hermite::expect_he(Nonlinearity::Identity, 1) == doctest::Approx(1.0));
    CHECK(hermite::expect_he(Nonlinearity::Identity, 3) == doctest::Approx(0.0));
    CHECK(hermite::expect_sq(Nonlinearity::Identity) == doctest::Approx(1.0));

    // relu: E[f'] = P(xi > 0) = 1/2, E[f^2] = 1/2, E[f'''] = 0
    CHECK(hermite::expect_he(Nonlinearity::Relu, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(hermite::expect_he(Nonlinearity::Relu, 3) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(hermite::expect_sq(Nonlinearity::Relu) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("piecewise route agrees with the 200-node quadrature oracle") {
    const auto rule = hermite::gauss_hermite(200);
    auto quad = [&](Nonlinearity f, int n, double scale) {
        double acc = 0.0;
        for (Index i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights(i) * apply(f, scale * rule.nodes(i)) *
                   hermite::hermite_he(n, rule.nodes(i));
        return acc;
    };
    // polynomial kinds: quadrature is exact, so agreement is tight
    for (auto f : {Nonlinearity::Cube, Nonlinearity::Identity})
        for (int n : {1, 2, 3, 5})
            CHECK(hermite::expect_he(f, n, 1.3) ==
                  doctest::Approx(quad(f, n, 1.3)).epsilon(1e-11));
    // kinked kinds: the quadrature oracle itself carries O(1e-3) error
    for (auto f : {Nonlinearity::Sign, Nonlinearity::Relu})
        for (int n : {1, 3})
            CHECK(std::abs(hermite::expect_he(f, n, 1.0) - quad(f, n, 1.0)) < 5e-3);
}

TEST_CASE("tanh expectations are stable under quadrature order") {
    // smooth integrand: value should already be converged at 200 nodes
    const double v = hermite::expect_he(Nonlinearity::Tanh, 1);
    CHECK(v == doctest::Approx(0.60562).epsilon(1e-4));
    const auto rule = hermite::gauss_hermite(400);
    double acc = 0.0;
    for (Index i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights(i) * std::tanh(rule.nodes(i)) * rule.nodes(i);
    CHECK(v == doctest::Approx(acc).epsilon(1e-12));
}
