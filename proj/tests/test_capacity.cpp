#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "perfsde/capacity.hpp"

using namespace perfsde;
using std::numbers::pi;

namespace {

DomainSpec disk_with_hole(double eps) {
    DomainSpec spec;
    spec.dimension = 2;
    spec.outer = OuterShape::ball({0.0, 0.0, 0.0}, 1.0);
    spec.holes.push_back({{0.0, 0.0, 0.0}, eps, HoleShape::Ball});
    return spec;
}

DomainSpec ball3d_with_hole(double eps) {
    DomainSpec spec;
    spec.dimension = 3;
    spec.outer = OuterShape::ball({0.0, 0.0, 0.0}, 1.0);
    spec.holes.push_back({{0.0, 0.0, 0.0}, eps, HoleShape::Ball});
    return spec;
}

DomainSpec square_with_hole(double eps, Point center = {0.5, 0.5, 0.0}) {
    DomainSpec spec;
    spec.dimension = 2;
    spec.outer = OuterShape::box({0.0, 0.0, 0.0}, {1.0, 1.0, 0.0});
    spec.holes.push_back({center, eps, HoleShape::Ball});
    return spec;
}

}  // namespace

TEST_CASE("lemma 1 leading terms") {
    CHECK(ball_capacity_asymptotic(0.05, 2) == doctest::Approx(2.0 * pi / std::log(20.0)).epsilon(1e-12));
    CHECK(ball_capacity_asymptotic(0.05, 2) == doctest::Approx(2.0974).epsilon(1e-4));
    CHECK(ball_capacity_asymptotic(0.05, 3) == doctest::Approx(0.6283).epsilon(1e-4));
    CHECK(ball_capacity_asymptotic(1e-12, 3) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK_THROWS_AS(ball_capacity_asymptotic(1.0, 2), InvalidEps);
}

TEST_CASE("2D concentric annulus matches the radial closed form") {
    // cap = 2 pi / ln(R/eps) for the annulus eps < r < R.
    const double exact = 2.0 * pi / std::log(1.0 / 0.1);
    const double computed = richardson_capacity(disk_with_hole(0.1), 80);
    CHECK(computed == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("3D concentric shell matches the radial closed form") {
    const double exact = 4.0 * pi / (1.0 / 0.1 - 1.0);
    const double computed = richardson_capacity(ball3d_with_hole(0.1), 40);
    CHECK(computed == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("hole that catches no lattice node has zero capacity") {
    DomainSpec spec = square_with_hole(1e-6, {0.47, 0.47, 0.0});
    const CapacityResult r = capacity(spec, 8);
    CHECK(r.value == 0.0);
    for (const double v : r.potential) CHECK(v == 0.0);
}

TEST_CASE("capacity result invariants") {
    const CapacityResult r = capacity(square_with_hole(0.15), 48);
    CHECK(r.value > 0.0);
    for (const double v : r.potential) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(r.cg_residual <= 1e-9);
}

TEST_CASE("cube hole capacity is below ball hole capacity") {
    for (const double eps : {0.1, 0.2}) {
        DomainSpec ball = square_with_hole(eps);
        DomainSpec cube = square_with_hole(eps);
        cube.holes[0].shape = HoleShape::Cube;
        const double cb = capacity(ball, 64).value;
        const double cc = capacity(cube, 64).value;
        CHECK(cc <= cb);
    }
}

TEST_CASE("subadditivity for two disjoint holes") {
    // cap(A u B) computed by clamping both holes at once on one grid.
    DomainSpec both;
    both.dimension = 2;
    both.outer = OuterShape::box({0.0, 0.0, 0.0}, {1.0, 1.0, 0.0});
    both.holes.push_back({{0.3, 0.3, 0.0}, 0.1, HoleShape::Ball});
    both.holes.push_back({{0.7, 0.7, 0.0}, 0.1, HoleShape::Ball});

    const int res = 64;
    const Grid grid(both.without_holes(), res);
    const CapacityResult ra = capacity(both.with_single_hole(0), res);
    const CapacityResult rb = capacity(both.with_single_hole(1), res);

    // max(v_a, v_b) is admissible for the union (it is 1 on both holes), so
    // its energy upper-bounds cap(A u B); the lattice inequality
    // E(max) + E(min) <= E(v_a) + E(v_b) keeps it below the sum.
    std::vector<double> trial(ra.potential.size());
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = std::max(ra.potential[i], rb.potential[i]);
    const double union_bound = dirichlet_energy(grid, trial);
    CHECK(union_bound <= (ra.value + rb.value) * 1.05);
    CHECK(union_bound >= std::max(ra.value, rb.value) * 0.95);
}

TEST_CASE("lemma 1 remainder shrinks with eps") {
    // In the square the true capacity is 2 pi / (log(1/eps) + O(1)), so the
    // relative gap to the asymptotic value shrinks like 1/log(1/eps). The
    // concentric disk is no good here: there the formula is exact.
    double prev = std::numeric_limits<double>::infinity();
    for (const double eps : {0.2, 0.1, 0.05}) {
        const int res = eps < 0.075 ? 160 : 80;
        const double computed = richardson_capacity(square_with_hole(eps), res);
        const double eta = std::abs(computed / ball_capacity_asymptotic(eps, 2) - 1.0);
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("capacity requires exactly one hole") {
    DomainSpec none = square_with_hole(0.1);
    none.holes.clear();
    CHECK_THROWS_AS(capacity(none, 32), InvalidSpec);
}
