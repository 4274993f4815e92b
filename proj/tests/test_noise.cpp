#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "perfsde/noise.hpp"

using namespace perfsde;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

double rational_gamma(double t) {
    const double q = (2.0 + t * t) / (1.0 + t * t);
    return 16.0 * q * q;
}

double rational_rho(double t) {
    const double q = (2.0 + t * t) / (2.0 * (1.0 + t * t));
    return q * q;
}

}  // namespace

TEST_CASE("linear model evaluation") {
    const NoiseModel m = NoiseModel::linear(3.0);
    CHECK(m.eval(0.0, 2.0) == doctest::Approx(6.0));
    CHECK(m.eval(7.5, 2.0) == doctest::Approx(6.0));
    CHECK(m.gamma0() == doctest::Approx(9.0));
    CHECK(m.rho0() == doctest::Approx(9.0));
}

TEST_CASE("H0 holds exactly for all built-in models") {
    for (const NoiseModel& m : {NoiseModel::zero(), NoiseModel::linear(3.0), NoiseModel::rational()})
        for (const double t : {0.0, 0.5, 3.0, 100.0}) CHECK(m.eval(t, 0.0) == 0.0);
}

TEST_CASE("rational model point value") {
    const NoiseModel m = NoiseModel::rational();
    CHECK(m.eval(0.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(m.gamma0() == doctest::Approx(64.0));
    CHECK(m.rho0() == doctest::Approx(1.0));
}

TEST_CASE("check_hypotheses is clean for both paper examples") {
    const auto ts = linspace(0.0, 10.0, 41);
    const auto us = linspace(-10.0, 10.0, 41);

    SUBCASE("linear with gamma = rho = alpha^2") {
        const auto report = check_hypotheses(NoiseModel::linear(3.0), ts, us);
        CHECK(report.clean());
        CHECK(report.h0_ok);
        CHECK(report.worst_h1 <= 0.0);
        CHECK(report.worst_h2 <= 0.0);
    }
    SUBCASE("rational with the stated envelopes") {
        const auto report = check_hypotheses(NoiseModel::rational(), ts, us);
        CHECK(report.clean());
    }
    SUBCASE("deliberately wrong gamma flags a violation") {
        const NoiseModel bad = NoiseModel::custom([](double, double) { return 3.0; },
                                                  [](double) { return 1.0; },
                                                  [](double) { return 9.0; }, 1.0, 9.0);
        const auto report = check_hypotheses(bad, ts, us);
        CHECK_FALSE(report.clean());
        CHECK(report.worst_h1 > 0.0);
        bool found_h1 = false;
        for (const auto& v : report.violations) found_h1 = found_h1 || v.hypothesis == '1';
        CHECK(found_h1);
    }
}

TEST_CASE("cesaro estimate") {
    SUBCASE("constant is exact") {
        CHECK(std::abs(cesaro_estimate([](double) { return 2.5; }, 100.0, 1000) - 2.5) <= 1e-12);
    }
    SUBCASE("rational gamma tends to 16") {
        const double est = cesaro_estimate(rational_gamma, 1000.0, 100000);
        CHECK(est == doctest::Approx(16.0).epsilon(0.05));
        // The paper's gamma0 = 64 is an upper bound, not tight.
        CHECK(est < 64.0);
    }
    SUBCASE("rational rho tends to 1/4") {
        const double est = cesaro_estimate(rational_rho, 1000.0, 100000);
        CHECK(est == doctest::Approx(0.25).epsilon(0.05));
    }
    SUBCASE("model accessors agree with the free functions") {
        const NoiseModel m = NoiseModel::rational();
        CHECK(m.gamma(2.0) == doctest::Approx(rational_gamma(2.0)).epsilon(1e-12));
        CHECK(m.rho(2.0) == doctest::Approx(rational_rho(2.0)).epsilon(1e-12));
    }
    SUBCASE("non-finite integrand is rejected") {
        CHECK_THROWS_AS(cesaro_estimate([](double t) { return 1.0 / t; }, 1.0, 100), NonFinite);
    }
    SUBCASE("too few steps is rejected") {
        CHECK_THROWS_AS(cesaro_estimate([](double) { return 1.0; }, 1.0, 5), InvalidSpec);
    }
}
