#include <doctest.h>

#include <cmath>
#include <limits>

#include "ambigg/errors.hpp"
#include "ambigg/model.hpp"
#include "ambigg/presets.hpp"
#include "oracles.hpp"

using namespace ambigg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("model") {

TEST_CASE("posterior parameters for both prior kinds") {
    const auto at_prior_mean = posterior_params(PriorFamily::normal_prior(2.0, 0.5), 2.0, 0.5);
    CHECK(at_prior_mean.mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(at_prior_mean.precision == doctest::Approx(4.0).epsilon(1e-15));

    const auto diffuse = posterior_params(PriorFamily::improper_uniform(), 4.0, 1.3);
    CHECK(diffuse.mean == 1.3);
    CHECK(diffuse.precision == 4.0);

    const auto shrunk = posterior_params(PriorFamily::normal_prior(2.0, 0.52), 1.1, 0.0);
    CHECK(shrunk.mean == doctest::Approx(2.0 * 0.52 / 3.1).epsilon(1e-15));
    CHECK(shrunk.precision == doctest::Approx(3.1).epsilon(1e-15));
}

TEST_CASE("posterior mean rises with the signal, precision does not") {
    const auto priors = PriorFamily::normal_prior(1.7, 0.3);
    double prev_mean = -kInf;
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        const auto p = posterior_params(priors, 0.8, x);
        CHECK(p.mean > prev_mean);
        CHECK(p.precision == doctest::Approx(2.5).epsilon(1e-15));
        prev_mean = p.mean;
    }
}

TEST_CASE("normal prior with custom noise is rejected") {
    PriorFamily priors = PriorFamily::normal_prior(2.0, 0.5);
    priors.noise.kind = NoiseFamily::Kind::custom;
    priors.noise.cdf = [](double, double e) { return e > 0 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(posterior_params(priors, 1.0, 0.0), UnsupportedError);
}

TEST_CASE("opponent mass against a cutoff profile") {
    const auto priors = PriorFamily::improper_uniform();
    for (double xi : {0.3, 1.0, 4.0}) {
        CHECK(opponent_mass(priors, xi, 0.7, 0.7) == doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK(opponent_mass(priors, 2.0, -kInf, 0.1) == 1.0);
    CHECK(opponent_mass(priors, 2.0, kInf, 0.1) == 0.0);
    CHECK(opponent_mass(priors, 4.0, 0.5, 0.0) ==
          doctest::Approx(1.0 - double(oracles::normal_cdf_reference(1.0L))).epsilon(1e-13));
}

TEST_CASE("opponent mass is monotone and bounded") {
    const auto priors = PriorFamily::improper_uniform();
    for (double xi : {0.5, 2.0}) {
        for (double theta : {-1.0, 0.2, 1.4}) {
            double prev = 2.0;
            for (double kappa = -4.0; kappa <= 4.0; kappa += 0.5) {
                const double l = opponent_mass(priors, xi, kappa, theta);
                CHECK(l >= 0.0);
                CHECK(l <= 1.0);
                CHECK(l <= prev + 1e-15);
                prev = l;
            }
        }
        for (double kappa : {-1.0, 0.3, 2.0}) {
            double prev = -1.0;
            for (double theta = -4.0; theta <= 4.0; theta += 0.5) {
                const double l = opponent_mass(priors, xi, kappa, theta);
                CHECK(l >= prev - 1e-15);
                prev = l;
            }
        }
    }
}

TEST_CASE("posterior stochastic dominance in the signal") {
    const auto priors = PriorFamily::normal_prior(2.0, 0.5);
    for (double xi : {0.4, 1.0, 2.5}) {
        for (double x = -1.0; x < 1.0; x += 0.4) {
            const auto lo = posterior_params(priors, xi, x);
            const auto hi = posterior_params(priors, xi, x + 0.4);
            for (double theta = -2.0; theta <= 3.0; theta += 0.25) {
                const double cdf_lo = std_normal((theta - lo.mean) * std::sqrt(lo.precision)).cdf;
                const double cdf_hi = std_normal((theta - hi.mean) * std::sqrt(hi.precision)).cdf;
                CHECK(cdf_hi <= cdf_lo + 1e-12);
            }
        }
    }
}

TEST_CASE("assumption validator passes the benchmark presets") {
    const Scenario linear = make_linear(2.0, 0.52);
    const auto linear_report =
        validate_assumptions(linear.model, linear.priors, AmbiguitySet::interval(0.56, 1.1));
    for (const auto& check : linear_report.checks) {
        INFO(check.id, ": ", check.detail);
        CHECK(check.passed);
    }

    const Scenario debt = make_debt(0.4);
    const auto debt_report =
        validate_assumptions(debt.model, debt.priors, AmbiguitySet::interval(1.0, 4.0));
    for (const auto& check : debt_report.checks) {
        INFO(check.id, ": ", check.detail);
        CHECK(check.passed);
    }

    const Scenario currency = make_currency(2.0, 0.2, 0.3, 0.0);
    const auto currency_report =
        validate_assumptions(currency.model, currency.priors, AmbiguitySet::interval(1.0, 4.0));
    for (const auto& check : currency_report.checks) {
        INFO(check.id, ": ", check.detail);
        CHECK(check.passed);
    }
}

TEST_CASE("assumption validator flags a decreasing action-1 payoff") {
    CustomActionSpec stay; // constant 0
    CustomActionSpec act;
    act.l_slope = -1.0; // u(1, l, theta) = -l: falls in the opponent mass
    const Scenario broken = make_custom(stay, act, PriorFamily::normal_prior(2.0, 0.5));
    const auto report =
        validate_assumptions(broken.model, broken.priors, AmbiguitySet::interval(0.5, 1.0));
    bool a1_failed = false;
    for (const auto& check : report.checks) {
        if (check.id == "A1") a1_failed = !check.passed;
    }
    CHECK(a1_failed);
    CHECK(report.first_failure().rfind("A1", 0) == 0);
    CHECK_FALSE(report.all_passed());
}

TEST_CASE("switching strategy acts above its cutoff only") {
    const SwitchingStrategy s{0.3};
    CHECK(s(0.31) == 1);
    CHECK(s(0.3) == 0);
    CHECK(s(-2.0) == 0);
    const SwitchingStrategy always{-kInf};
    CHECK(always(-100.0) == 1);
    const SwitchingStrategy never{kInf};
    CHECK(never(100.0) == 0);
}

TEST_CASE("ambiguity sets validate their bounds") {
    CHECK_THROWS_AS(AmbiguitySet::interval(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AmbiguitySet::interval(2.0, 1.0), std::invalid_argument);
    CHECK(AmbiguitySet::singleton(0.37).is_singleton());
    const auto product = AmbiguitySet::product(Interval{1.0, 2.0}, Interval{1.0, 1.0});
    CHECK(product.kind == AmbiguitySet::Kind::product);
    CHECK_FALSE(product.is_singleton());
}

} // TEST_SUITE
