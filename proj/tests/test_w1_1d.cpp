#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "torus/bernoulli.hpp"
#include "torus/kernels.hpp"
#include "torus/measure.hpp"
#include "torus/moments.hpp"

using namespace torus;

namespace {

Measure random_prob_atoms(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Discrete a;
    for (int j = 0; j < count; ++j) {
        a.points.push_back({u(rng)});
        a.weights.push_back(0.05 + u(rng));
    }
    return normalized_measure(Measure(1, a, false));
}

TrigPolynomial fejer_dirac_poly(int n) {
    MomentTable t = moments(dirac({0.0}), n);
    return convolve(t, KernelSpec::fejer(n));
}

}  // namespace

TEST_CASE("w1 of two diracs is the wrap distance") {
    REQUIRE(w1_1d(dirac({0.0}), dirac({0.5})) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(w1_1d(dirac({0.1}), dirac({0.9})) == Catch::Approx(0.2).margin(1e-12));
    REQUIRE(w1_1d(dirac({0.25}), dirac({0.25})) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("w1 between dirac and lebesgue") {
    // int |B1(t)| dt = 1/4
    REQUIRE(w1_1d(dirac({0.0}), Measure(1, Lebesgue{})) ==
            Catch::Approx(0.25).margin(1e-10));
}

TEST_CASE("best-delta polynomial achieves 1/(4(n+1))") {
    for (int n : {1, 2, 3, 7, 20, 50}) {
        double w = w1_1d(dirac({0.0}), best_delta_poly(n));
        REQUIRE(w == Catch::Approx(1.0 / (4.0 * (n + 1))).margin(1e-8));
    }
}

TEST_CASE("w1 of the fejer approximant equals the exact absolute moment") {
    for (int n : {1, 2, 5, 16, 41}) {
        double w = w1_1d(dirac({0.0}), fejer_dirac_poly(n));
        REQUIRE(w == Catch::Approx(fejer_abs_moment(n)).margin(1e-9));
    }
}

TEST_CASE("jackson beats fejer for even degrees from eight on") {
    for (int n = 8; n <= 40; n += 2) {
        MomentTable t = moments(dirac({0.0}), n);
        double wj = w1_1d(dirac({0.0}), convolve(t, KernelSpec::jackson(n)));
        double wf = w1_1d(dirac({0.0}), convolve(t, KernelSpec::fejer(n)));
        REQUIRE(wj <= wf);
        REQUIRE(wj <= 1.5 / (n + 2.0));  // the kernel bound
    }
}

TEST_CASE("saturation: smooth density error is exactly 1/(pi^2 (n+1))") {
    TrigPolynomial w(1, 1);
    w.coeffs = {0.5, 1.0, 0.5};  // 1 + cos(2 pi x)
    for (int n : {1, 3, 10, 25}) {
        MomentTable t(1, n);
        t.values[static_cast<std::size_t>(n - 1)] = 0.5;
        t.values[static_cast<std::size_t>(n)] = 1.0;
        t.values[static_cast<std::size_t>(n + 1)] = 0.5;
        TrigPolynomial fw = convolve(t, KernelSpec::fejer(n));
        double dist = w1_1d(fw, w);
        // |difference profile| = |sin(2 pi x)| / (2 pi (n+1))
        REQUIRE(dist == Catch::Approx(1.0 / (pi * pi * (n + 1))).margin(1e-10));
        REQUIRE(dist >= 1.0 / (4.0 * pi * (n + 1)));  // saturation lower bound
    }
}

TEST_CASE("metric axioms on random discrete measures") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        Measure a = random_prob_atoms(rng, 4 + trial % 5);
        Measure b = random_prob_atoms(rng, 3 + trial % 4);
        Measure c = random_prob_atoms(rng, 5);
        double ab = w1_1d(a, b), ba = w1_1d(b, a);
        REQUIRE(ab == Catch::Approx(ba).margin(1e-10));
        REQUIRE(w1_1d(a, a) == Catch::Approx(0.0).margin(1e-10));
        double ac = w1_1d(a, c), cb = w1_1d(c, b);
        REQUIRE(ab <= ac + cb + 1e-8);
    }
}

TEST_CASE("w1 against a half-shifted fejer kernel uses translation invariance") {
    // W1(delta_a, F_n * delta_a) is independent of a
    int n = 12;
    for (double a : {0.0, 0.3, 0.77}) {
        MomentTable t = moments(dirac({a}), n);
        double w = w1_1d(dirac({a}), convolve(t, KernelSpec::fejer(n)));
        REQUIRE(w == Catch::Approx(fejer_abs_moment(n)).margin(1e-9));
    }
}

TEST_CASE("w1_1d input validation") {
    REQUIRE_THROWS_AS(w1_1d(dirac({0.1, 0.2}), dirac({0.3, 0.4})),
                      std::invalid_argument);
    Discrete unnorm;
    unnorm.points = {{0.5}};
    unnorm.weights = {2.0};
    REQUIRE_THROWS_AS(w1_1d(Measure(1, unnorm, false), dirac({0.0})),
                      std::invalid_argument);
    TrigPolynomial complex_poly(1, 1);
    complex_poly.coeffs = {cplx(0.0, 0.4), 1.0, cplx(0.3, 0.1)};
    REQUIRE_THROWS_AS(w1_1d(complex_poly, dirac({0.0})), std::invalid_argument);
}
