#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "perfsde/expansion.hpp"

using namespace perfsde;
using std::numbers::pi;

namespace {

DomainSpec unit_square(std::vector<HoleSpec> holes = {}) {
    DomainSpec spec;
    spec.dimension = 2;
    spec.outer = OuterShape::box({0.0, 0.0, 0.0}, {1.0, 1.0, 0.0});
    spec.holes = std::move(holes);
    return spec;
}

DomainSpec unit_disk(std::vector<HoleSpec> holes = {}) {
    DomainSpec spec;
    spec.dimension = 2;
    spec.outer = OuterShape::ball({0.0, 0.0, 0.0}, 1.0);
    spec.holes = std::move(holes);
    return spec;
}

}  // namespace

TEST_CASE("no holes gives a zero-shift report") {
    const ExpansionReport r = expansion_report(unit_square(), 32, CapacityMode::Computed);
    CHECK(r.predicted_shift == 0.0);
    CHECK(r.remainder == 0.0);
    CHECK(r.remainder_ratio == 0.0);
    CHECK(r.lambda_base == doctest::Approx(2.0 * pi * pi).epsilon(1e-3));
    CHECK(r.lambda_perforated == doctest::Approx(r.lambda_base));
}

TEST_CASE("square center hole in lemma1 mode reproduces the closed form") {
    const ExpansionReport r =
        expansion_report(unit_square({{{0.5, 0.5, 0.0}, 0.05, HoleShape::Ball}}), 80, CapacityMode::Lemma1);
    // phi1 = 2 sin(pi x) sin(pi y), phi1^2(1/2,1/2) = 4; cap = 2 pi / ln 20.
    CHECK(r.phi1_sq_at_centers.size() == 1);
    CHECK(r.phi1_sq_at_centers[0] == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(r.cap_total == doctest::Approx(2.0 * pi / std::log(20.0)).epsilon(1e-12));
    CHECK(r.predicted_shift == doctest::Approx(8.389).epsilon(1e-3));
    CHECK(r.lambda_perforated > r.lambda_base);
}

TEST_CASE("disk concentric hole in computed mode") {
    const ExpansionReport r =
        expansion_report(unit_disk({{{0.0, 0.0, 0.0}, 0.05, HoleShape::Ball}}), 80, CapacityMode::Computed);
    // phi1^2(0) = 1 / (pi J1(j01)^2) = 1.1801 for the unit disk.
    CHECK(r.phi1_sq_at_centers[0] == doctest::Approx(1.1801).epsilon(0.01));
    CHECK(r.predicted_shift == doctest::Approx(1.1801 * 2.0974).epsilon(0.05));
    CHECK(r.lambda_perforated >= r.lambda_base);
}

TEST_CASE("two-hole shift is additive") {
    const std::vector<HoleSpec> holes{{{0.25, 0.25, 0.0}, 0.05, HoleShape::Ball},
                                      {{0.75, 0.75, 0.0}, 0.05, HoleShape::Ball}};
    const ExpansionReport both = expansion_report(unit_square(holes), 64, CapacityMode::Lemma1);
    // phi1^2 = 4 sin^4(pi/4) = 1 at each center, so the shift is 2 * 2.0974.
    CHECK(both.predicted_shift == doctest::Approx(2.0 * 2.0974).epsilon(0.005));

    const ExpansionReport a = expansion_report(unit_square({holes[0]}), 64, CapacityMode::Lemma1);
    const ExpansionReport b = expansion_report(unit_square({holes[1]}), 64, CapacityMode::Lemma1);
    CHECK(both.predicted_shift == doctest::Approx(a.predicted_shift + b.predicted_shift).epsilon(0.01));
}

TEST_CASE("raw eigenvalues keep the domain monotonicity exactly") {
    const ExpansionReport r =
        expansion_report(unit_square({{{0.5, 0.5, 0.0}, 0.1, HoleShape::Ball}}), 48, CapacityMode::Lemma1);
    CHECK(r.lambda_perf_coarse >= r.lambda_base_coarse);
    CHECK(r.lambda_perf_fine >= r.lambda_base_fine);
}

TEST_CASE("remainder study plumbing") {
    const DomainSpec tmpl = unit_square({{{0.5, 0.5, 0.0}, 0.1, HoleShape::Ball}});

    SUBCASE("single row") {
        const std::vector<double> eps{0.1};
        const std::vector<int> res{48};
        const auto rows = remainder_study(tmpl, eps, res, CapacityMode::Lemma1);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].eps == doctest::Approx(0.1));
        CHECK(rows[0].resolution == 48);
    }
    SUBCASE("eps list must strictly decrease") {
        const std::vector<double> eps{0.05, 0.1};
        const std::vector<int> res{64, 48};
        CHECK_THROWS_AS(remainder_study(tmpl, eps, res, CapacityMode::Lemma1), InvalidSpec);
    }
    SUBCASE("schedules must pair up") {
        const std::vector<double> eps{0.1, 0.05};
        const std::vector<int> res{48};
        CHECK_THROWS_AS(remainder_study(tmpl, eps, res, CapacityMode::Lemma1), InvalidSpec);
    }
}

TEST_CASE("scheduled resolution resolves the hole") {
    for (const double eps : {0.2, 0.1, 0.05, 0.025}) {
        const int res = scheduled_resolution(eps);
        CHECK(1.0 / (2 * res) <= eps / 8.0);  // fine grid of the pair
        CHECK(res >= 64);
    }
    CHECK_THROWS_AS(scheduled_resolution(0.0), InvalidEps);
}

TEST_CASE("disconnected perforation is rejected") {
    std::vector<HoleSpec> wall;
    for (const double x : {0.1, 0.3, 0.5, 0.7, 0.9}) wall.push_back({{x, 0.5, 0.0}, 0.095, HoleShape::Ball});
    CHECK_THROWS_AS(expansion_report(unit_square(wall), 32, CapacityMode::Lemma1), NotConnected);
}
