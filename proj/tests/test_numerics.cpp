#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ambigg/errors.hpp"
#include "ambigg/interim.hpp"
#include "ambigg/numerics.hpp"
#include "oracles.hpp"

using namespace ambigg;

TEST_SUITE("numerics") {

TEST_CASE("reference cdf reproduces tabulated values") {
    // Guards the oracle itself before anything is checked against it.
    CHECK(double(oracles::normal_cdf_reference(0.0L)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(double(oracles::normal_cdf_reference(1.0L)) ==
          doctest::Approx(0.8413447460685429).epsilon(1e-14));
    CHECK(double(oracles::normal_cdf_reference(2.0L)) ==
          doctest::Approx(0.9772498680518208).epsilon(1e-14));
    CHECK(double(oracles::normal_cdf_reference(-1.6448536269514722L)) ==
          doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("std_normal at zero and against the reference") {
    const auto [pdf0, cdf0] = std_normal(0.0);
    CHECK(pdf0 == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(cdf0 == 0.5);

    CHECK(std_normal(1.96).cdf == doctest::Approx(0.9750021048517795).epsilon(1e-13));

    for (double z = -8.0; z <= 8.0; z += 0.125) {
        const double ref = double(oracles::normal_cdf_reference(z));
        CHECK(std::abs(std_normal(z).cdf - ref) <= 1e-12);
    }
}

TEST_CASE("std_normal symmetry and monotonicity") {
    for (double z : {0.13, 0.9, 1.7, 3.3, 6.1}) {
        CHECK(std_normal(-z).cdf == doctest::Approx(1.0 - std_normal(z).cdf).epsilon(1e-14));
    }
    double prev = -1.0;
    for (double z = -8.0; z <= 8.0; z += 0.05) {
        const double c = std_normal(z).cdf;
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("normal pdf integrates to one") {
    const auto result =
        integrate_adaptive([](double z) { return std_normal(z).pdf; }, Interval{-8.0, 8.0});
    CHECK(result.converged);
    CHECK(std::abs(result.value - 1.0) <= 1e-10);
}

TEST_CASE("quantile inverts the cdf") {
    CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std_normal_quantile(0.4) ==
          doctest::Approx(oracles::normal_quantile_reference(0.4)).epsilon(1e-12));
    CHECK(std_normal_quantile(0.4) == doctest::Approx(-0.2533471).epsilon(1e-6));

    for (double p = 0.0005; p < 1.0; p += 0.0101) {
        CHECK(std::abs(std_normal(std_normal_quantile(p)).cdf - p) <= 1e-10);
    }

    CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(-0.2), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.7), std::domain_error);
}

TEST_CASE("find_roots on polynomials") {
    const auto quad = find_roots([](double x) { return x * x - 1.0; }, Interval{-2.0, 2.0}, 101);
    REQUIRE(quad.size() == 2);
    CHECK(quad.roots[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(quad.roots[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto line = find_roots([](double x) { return x - 0.5; }, Interval{0.0, 1.0}, 101);
    REQUIRE(line.size() == 1);
    CHECK(line.roots[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("find_roots matches on f and -f") {
    auto f = [](double x) { return (x + 1.3) * (x - 0.2) * (x - 2.7) / 10.0; };
    const auto direct = find_roots(f, Interval{-2.0, 3.0}, 257);
    const auto flipped = find_roots([&](double x) { return -f(x); }, Interval{-2.0, 3.0}, 257);
    REQUIRE(direct.size() == 3);
    REQUIRE(flipped.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(direct.roots[i] == doctest::Approx(flipped.roots[i]).epsilon(1e-10));
    }
}

TEST_CASE("find_roots reports the offending abscissa") {
    auto f = [](double x) { return x < 0.0 ? std::numeric_limits<double>::quiet_NaN() : x - 1.0; };
    try {
        find_roots(f, Interval{-1.0, 2.0}, 64);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.at() < 0.0);
    }
}

TEST_CASE("find_roots resolves the three-crossing diagonal payoff") {
    // Low-precision linear diagonal with three equilibria; the two outer
    // crossings sit near -1.45 and 3.15, the middle one near -0.15.
    auto g = [](double kappa) { return interim_payoff_linear(2.0, 0.48, 0.37, kappa, kappa); };
    const auto roots = find_roots(g, Interval{-3.0, 4.0}, 512);
    REQUIRE(roots.size() == 3);
    for (double r : roots.roots) {
        CHECK(std::abs(g(r)) <= 1e-10);
    }
    // Golden values pinned from the solver itself.
    CHECK(roots.roots[0] == doctest::Approx(-1.458370395392679).epsilon(1e-8));
    CHECK(roots.roots[1] == doctest::Approx(-0.15590980464242626).epsilon(1e-8));
    CHECK(roots.roots[2] == doctest::Approx(3.1769607384535798).epsilon(1e-8));
}

TEST_CASE("minimize_on_interval basics") {
    const auto parabola =
        minimize_on_interval([](double x) { return (x - 1.0) * (x - 1.0); }, Interval{0.0, 3.0});
    CHECK(parabola.argmin == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(parabola.min == doctest::Approx(0.0).epsilon(1e-12));

    const auto edge = minimize_on_interval([](double x) { return x; }, Interval{2.0, 5.0});
    CHECK(edge.argmin == 2.0);
    CHECK(edge.min == 2.0);
}

TEST_CASE("minimize_on_interval matches a dense-grid oracle") {
    auto payoff = [](double xi) { return interim_payoff_linear(2.0, 0.52, xi, 0.3, 0.3); };
    const auto mine = minimize_on_interval(payoff, Interval{0.56, 1.1});
    const auto ref = oracles::dense_grid_min(payoff, 0.56, 1.1, 100000);
    CHECK(std::abs(mine.min - ref.second) <= 1e-7);
}

TEST_CASE("minimize_on_interval never exceeds sampled values") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    auto bumpy = [](double x) { return std::sin(3.0 * x) + 0.3 * x * x; };
    const auto m = minimize_on_interval(bumpy, Interval{-2.0, 2.0});
    for (int i = 0; i < 1000; ++i) {
        CHECK(m.min <= bumpy(unif(rng)) + 1e-9);
    }
}

TEST_CASE("integrate_adaptive basics") {
    CHECK(integrate_adaptive([](double) { return 1.0; }, Interval{0.0, 1.0}).value ==
          doctest::Approx(1.0).epsilon(1e-14));

    // A jump with a tight budget and shallow recursion exhausts the depth;
    // the result carries the warning instead of silently passing.
    auto step = [](double x) { return x > 0.31830988618 ? 1.0 : 0.0; };
    const auto forced = integrate_adaptive(step, Interval{0.0, 1.0}, 1e-10, 4);
    CHECK_FALSE(forced.converged);
    const auto relaxed = integrate_adaptive(step, Interval{0.0, 1.0}, 1e-10);
    CHECK(relaxed.value == doctest::Approx(1.0 - 0.31830988618).epsilon(1e-8));
}

} // TEST_SUITE
