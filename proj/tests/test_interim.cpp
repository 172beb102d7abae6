#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ambigg/errors.hpp"
#include "ambigg/interim.hpp"
#include "ambigg/presets.hpp"
#include "oracles.hpp"

using namespace ambigg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("interim") {

TEST_CASE("linear diagonal payoff at the prior mean") {
    // x = kappa = y collapses the closed form to y - 1/2 for any precisions.
    for (double eta : {0.7, 2.0, 5.0}) {
        for (double xi : {0.2, 1.1, 8.0}) {
            for (double y : {0.3, 0.52, 0.8}) {
                CHECK(interim_payoff_linear(eta, y, xi, y, y) ==
                      doctest::Approx(y - 0.5).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("linear payoff at extended cutoffs") {
    const double eta = 2.0, y = 0.52, xi = 1.1, x = 0.3;
    const double mean = (eta * y + xi * x) / (eta + xi);
    CHECK(interim_payoff_linear(eta, y, xi, x, -kInf) == doctest::Approx(mean).epsilon(1e-15));
    CHECK(interim_payoff_linear(eta, y, xi, x, kInf) ==
          doctest::Approx(mean - 1.0).epsilon(1e-15));
}

TEST_CASE("linear closed form equals the quadrature route") {
    const Scenario s = make_linear(2.0, 0.52);
    {
        const InterimQuery q{1, 0.1, 0.1, Precision(1.1)};
        const double general = interim_payoff_general(s.model, s.priors, q);
        CHECK(std::abs(general - interim_payoff_linear(2.0, 0.52, 1.1, 0.1, 0.1)) <= 1e-8);
    }
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> xs(-2.0, 2.5);
    std::uniform_real_distribution<double> xis(0.3, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double x = xs(rng);
        const double kappa = xs(rng);
        const double xi = xis(rng);
        const InterimQuery q{1, x, kappa, Precision(xi)};
        const double general = interim_payoff_general(s.model, s.priors, q);
        const double closed = interim_payoff_linear(2.0, 0.52, xi, x, kappa);
        CHECK(std::abs(general - closed) <= 1e-8);
    }
}

TEST_CASE("safe actions evaluate exactly") {
    const Scenario debt = make_debt(0.4);
    for (double xi : {0.5, 2.0, 8.0}) {
        for (double x : {-1.0, 0.3, 2.0}) {
            for (double kappa : {-kInf, 0.2, kInf}) {
                CHECK(interim_payoff_general(debt.model, debt.priors,
                                             {0, x, kappa, Precision(xi)}) == 0.4);
            }
        }
    }
}

TEST_CASE("regime closed forms equal the split quadrature route") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xs(-0.5, 1.5);
    std::uniform_real_distribution<double> xis(0.5, 6.0);
    const Scenario debt = make_debt(0.4);
    const Scenario currency = make_currency(2.0, 0.2, 0.3, 0.0);
    const Scenario bankrun = make_bankrun(StepTable{{{0.3, 0.2}, {1.0, 1.0}}});
    for (const Scenario* s : {&debt, &currency, &bankrun}) {
        for (int i = 0; i < 40; ++i) {
            const double x = xs(rng);
            const double kappa = xs(rng);
            const double xi = xis(rng);
            for (int a : {0, 1}) {
                const InterimQuery q{a, x, kappa, Precision(xi)};
                const double general = interim_payoff_general(s->model, s->priors, q);
                const double closed = s->model.closed_form(a, x, kappa, xi, xi);
                INFO(s->model.name, " a=", a, " x=", x, " kappa=", kappa, " xi=", xi);
                CHECK(std::abs(general - closed) <= 1e-8);
            }
        }
    }
}

TEST_CASE("worst case over a singleton and over an interval") {
    const Scenario s = make_linear(2.0, 0.52);
    const auto single = meu_payoff(s.model, s.priors, AmbiguitySet::singleton(0.8), 1, 0.2, 0.2);
    CHECK(single.value ==
          doctest::Approx(interim_payoff_linear(2.0, 0.52, 0.8, 0.2, 0.2)).epsilon(1e-14));
    CHECK(single.argmin_own == 0.8);

    const auto safe = meu_payoff(s.model, s.priors, AmbiguitySet::interval(0.56, 1.1), 0, 0.2, 0.2);
    CHECK(safe.value == 0.0);
    CHECK(safe.degenerate);

    auto payoff = [&](double xi) { return interim_payoff_linear(2.0, 0.52, xi, 0.2, 0.2); };
    const auto worst = meu_payoff(s.model, s.priors, AmbiguitySet::interval(0.56, 1.1), 1, 0.2, 0.2);
    const auto ref = oracles::dense_grid_min(payoff, 0.56, 1.1, 100000);
    CHECK(std::abs(worst.value - ref.second) <= 1e-7);
}

TEST_CASE("worst case never exceeds any member payoff") {
    const Scenario s = make_linear(2.0, 0.52);
    const AmbiguitySet ambiguity = AmbiguitySet::interval(0.56, 1.1);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> xis(0.56, 1.1);
    std::uniform_real_distribution<double> points(-1.0, 2.0);
    for (int rep = 0; rep < 5; ++rep) {
        const double x = points(rng);
        const double kappa = points(rng);
        const auto worst = meu_payoff(s.model, s.priors, ambiguity, 1, x, kappa);
        for (int i = 0; i < 100; ++i) {
            const double xi = xis(rng);
            CHECK(worst.value <= interim_payoff_linear(2.0, 0.52, xi, x, kappa) + 1e-9);
        }
    }
}

TEST_CASE("payoff gap structure in the linear game") {
    const Scenario s = make_linear(2.0, 0.52);
    const AmbiguitySet ambiguity = AmbiguitySet::interval(0.56, 1.1);
    // Far above every cutoff the gap favors acting, any opponent profile.
    for (double kappa : {-kInf, 0.0, kInf}) {
        CHECK(payoff_gap(s.model, s.priors, ambiguity, 6.0, kappa) > 0.0);
    }
    // With action 0 safe at zero, the gap equals the worst case of action 1.
    const double gap = payoff_gap(s.model, s.priors, ambiguity, 0.4, 0.7);
    const auto act = meu_payoff(s.model, s.priors, ambiguity, 1, 0.4, 0.7);
    CHECK(gap == doctest::Approx(act.value).epsilon(1e-12));
    // Singleton gap is just the closed form.
    CHECK(payoff_gap(s.model, s.priors, AmbiguitySet::singleton(0.9), 0.4, 0.7) ==
          doctest::Approx(interim_payoff_linear(2.0, 0.52, 0.9, 0.4, 0.7)).epsilon(1e-12));
}

TEST_CASE("worst-case gap is monotone in signal and cutoff") {
    const Scenario s = make_linear(2.0, 0.52);
    const AmbiguitySet ambiguity = AmbiguitySet::interval(0.56, 1.1);
    const int n = 20;
    for (int i = 0; i < n; ++i) {
        const double kappa = -1.0 + 3.0 * i / (n - 1);
        double prev = -kInf;
        for (int j = 0; j < n; ++j) {
            const double x = -1.0 + 3.0 * j / (n - 1);
            const double g = payoff_gap(s.model, s.priors, ambiguity, x, kappa);
            CHECK(g >= prev - 1e-9);
            prev = g;
        }
    }
    for (int j = 0; j < n; ++j) {
        const double x = -1.0 + 3.0 * j / (n - 1);
        double prev = kInf;
        for (int i = 0; i < n; ++i) {
            const double kappa = -1.0 + 3.0 * i / (n - 1);
            const double g = payoff_gap(s.model, s.priors, ambiguity, x, kappa);
            CHECK(g <= prev + 1e-9);
            prev = g;
        }
    }
}

TEST_CASE("product-mode worst case reduces to the interval case") {
    const Scenario debt = make_debt(0.4);
    const auto product = AmbiguitySet::product(Interval{1.0, 4.0}, Interval{2.0, 2.0});
    const auto m = meu_payoff(debt.model, debt.priors, product, 1, 0.3, 0.3);
    REQUIRE(m.argmin_others.has_value());
    CHECK(*m.argmin_others == 2.0);
    // Against the brute force over the own-precision axis.
    auto payoff = [&](double xi1) {
        return debt.model.closed_form(1, 0.3, 0.3, xi1, 2.0);
    };
    const auto ref = oracles::dense_grid_min(payoff, 1.0, 4.0, 20000);
    CHECK(std::abs(m.value - ref.second) <= 1e-6);
}

TEST_CASE("exponential aggregator on a constant payoff") {
    const Scenario debt = make_debt(0.4);
    for (double alpha : {1.0, 10.0, 100.0}) {
        const auto r = smooth_aggregate(debt.model, debt.priors, Interval{1.0, 4.0}, alpha, 0,
                                        0.3, 0.3);
        CHECK(r.certainty_equivalent == doctest::Approx(0.4).epsilon(1e-9));
        CHECK(r.aggregate ==
              doctest::Approx(-std::exp(-alpha * 0.4) / alpha).epsilon(1e-9));
    }
}

TEST_CASE("aggregator approaches the worst case as aversion grows") {
    const Scenario s = make_linear(2.0, 0.52);
    const Interval xi_range{0.56, 1.1};
    const AmbiguitySet ambiguity = AmbiguitySet::interval(xi_range.lo, xi_range.hi);
    // Sample points with a wide payoff spread: the convergence constant
    // ln(alpha R)/alpha needs R large enough for the 2% bound to bind.
    for (double x : {2.5, 3.0}) {
        for (double kappa : {-0.5, 0.4}) {
            const double worst = meu_payoff(s.model, s.priors, ambiguity, 1, x, kappa).value;
            double prev = kInf;
            for (double alpha : {1.0, 10.0, 100.0, 1000.0}) {
                const auto r = smooth_aggregate(s.model, s.priors, xi_range, alpha, 1, x, kappa);
                CHECK(r.certainty_equivalent >= worst - 1e-9);
                CHECK(r.certainty_equivalent <= prev + 1e-12);
                prev = r.certainty_equivalent;
            }
            // Payoff spread over the precision interval.
            double lo = kInf, hi = -kInf;
            for (int i = 0; i <= 64; ++i) {
                const double xi = xi_range.lo + xi_range.length() * i / 64;
                const double v = interim_payoff_linear(2.0, 0.52, xi, x, kappa);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            const auto tight = smooth_aggregate(s.model, s.priors, xi_range, 1000.0, 1, x, kappa);
            CHECK(std::abs(tight.certainty_equivalent - worst) <= 0.02 * (hi - lo) + 1e-12);
        }
    }
}

TEST_CASE("aggregator overflow guard") {
    const Scenario s = make_linear(2.0, 0.52);
    // Far below the cutoff the payoff is deeply negative; exp(-alpha pi)
    // cannot be represented for alpha = 1e3.
    CHECK_THROWS_AS(smooth_aggregate(s.model, s.priors, Interval{0.56, 1.1}, 1000.0, 1, -10.0, 0.0),
                    NumericalError);
    CHECK_THROWS_AS(smooth_aggregate(s.model, s.priors, Interval{0.56, 0.56}, 1.0, 1, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(smooth_aggregate(s.model, s.priors, Interval{0.56, 1.1}, 0.0, 1, 0.0, 0.0),
                    std::invalid_argument);
}

} // TEST_SUITE
