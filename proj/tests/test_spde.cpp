#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "perfsde/eigensolver.hpp"
#include "perfsde/spde.hpp"
#include "perfsde/stability.hpp"

using namespace perfsde;

namespace {

struct Setup {
    Grid grid;
    DiscreteLaplacian lap;
    EigenResult eig;

    explicit Setup(int resolution) : grid(make_spec(), resolution), lap(assemble(grid)), eig(first_eigenpair(lap)) {}

    static DomainSpec make_spec() {
        DomainSpec spec;
        spec.dimension = 2;
        spec.outer = OuterShape::box({0.0, 0.0, 0.0}, {1.0, 1.0, 0.0});
        return spec;
    }
};

SpdeConfig base_config() {
    SpdeConfig cfg;
    cfg.beta = 25.0;
    cfg.noise = NoiseModel::zero();
    cfg.dt = 0.005;
    cfg.T = 1.0;
    cfg.init = SpdeConfig::Init::Eigenfunction;
    cfg.seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("zero state is exactly invariant") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.noise = NoiseModel::linear(3.0);
    const std::vector<double> zero(static_cast<std::size_t>(s.grid.active_count()), 0.0);
    const auto next = spde_step(s.lap, cfg, zero, 0.0, 0.37, s.eig.lambda1);
    for (const double v : next) CHECK(v == 0.0);
}

TEST_CASE("one-step ratio on a small eigenfunction multiple") {
    const Setup s(32);
    SpdeConfig cfg = base_config();
    const double c = 1e-4;
    std::vector<double> u(s.eig.phi1);
    for (double& ui : u) ui *= c;
    const auto next = spde_step(s.lap, cfg, u, 0.0, 0.0, s.eig.lambda1);
    const double ratio = std::sqrt(l2_norm_sq(s.grid, next) / l2_norm_sq(s.grid, u));
    const double semi_implicit = (1.0 + cfg.dt * cfg.beta) / (1.0 + cfg.dt * s.eig.lambda1);
    CHECK(ratio == doctest::Approx(semi_implicit).epsilon(0.01));  // schemes agree to O(dt^2)
    CHECK(ratio == doctest::Approx(std::exp((cfg.beta - s.eig.lambda1) * cfg.dt)).epsilon(1e-6));
}

TEST_CASE("zero noise and beta = 0 contract any state") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.beta = 0.0;
    NormalStream stream(3, 0);
    std::vector<double> u(static_cast<std::size_t>(s.grid.active_count()));
    for (double& ui : u) ui = stream.normal();
    const double before = l2_norm_sq(s.grid, u);
    const auto next = spde_step(s.lap, cfg, u, 0.0, 0.0, s.eig.lambda1);
    CHECK(l2_norm_sq(s.grid, next) <= before);
}

TEST_CASE("seed determinism is bitwise") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.noise = NoiseModel::linear(2.0);
    cfg.init = SpdeConfig::Init::Random;
    const auto a = simulate_path(s.grid, s.lap, cfg, 4, nullptr, {}, s.eig.lambda1);
    const auto b = simulate_path(s.grid, s.lap, cfg, 4, nullptr, {}, s.eig.lambda1);
    CHECK(a.norm_sq == b.norm_sq);
    CHECK(a.lyapunov_hat == b.lyapunov_hat);
    const auto other = simulate_path(s.grid, s.lap, cfg, 5, nullptr, {}, s.eig.lambda1);
    CHECK(a.norm_sq != other.norm_sq);
}

TEST_CASE("zero-noise paths have exactly zero stochastic accumulators") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    const auto stats = simulate_path(s.grid, s.lap, cfg, 0, &s.eig.phi1, {}, s.eig.lambda1);
    CHECK(stats.ito_term == 0.0);
    CHECK(stats.qv_term == 0.0);
    CHECK(stats.martingale_term == 0.0);
}

TEST_CASE("deterministic instability grows at 2(beta - lambda1)") {
    const Setup s(32);
    SpdeConfig cfg = base_config();
    cfg.T = 1.0;
    cfg.burn_in = 0.0;
    cfg.init_norm = 1e-6;  // far from cubic saturation over this horizon
    const auto stats = simulate_path(s.grid, s.lap, cfg, 0, &s.eig.phi1, {}, s.eig.lambda1);
    const double expected = 2.0 * (cfg.beta - s.eig.lambda1);
    CHECK(stats.lyapunov_hat == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("per-step inequality diagnostics hold") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.noise = NoiseModel::linear(std::sqrt(12.0));
    cfg.init = SpdeConfig::Init::Random;
    cfg.T = 2.0;
    const auto stats = simulate_path(s.grid, s.lap, cfg, 1, nullptr, {}, s.eig.lambda1);
    CHECK(stats.min_gradient_rate >= 2.0 * s.eig.lambda1 - 1e-8);
    CHECK(stats.min_nonlinear_rate >= -2.0 * cfg.beta - 1e-8);
    CHECK(stats.max_h1_excess <= 1e-8);
}

TEST_CASE("lyapunov estimate tracks the linear-noise prediction") {
    const Setup s(32);
    SpdeConfig cfg = base_config();
    cfg.noise = NoiseModel::linear(std::sqrt(12.0));
    cfg.T = 30.0;
    cfg.paths = 8;
    cfg.seed = 12;
    const auto summary = ensemble(s.grid, s.lap, cfg);
    const double predicted = decay_bound(cfg.beta, 12.0, 12.0, s.eig.lambda1);
    CHECK(predicted == doctest::Approx(-1.447).epsilon(1e-3));
    CHECK(summary.lyapunov_median == doctest::Approx(predicted).epsilon(1.0));
    CHECK(summary.decayed_fraction > 0.9);

    // Almost-sure bound with the statistical tolerance 3 * 2 alpha / sqrt(T * paths).
    const double slack = 3.0 * 2.0 * std::sqrt(12.0) / std::sqrt(cfg.T * cfg.paths);
    CHECK(summary.lyapunov_median <= summary.decay_bound_value + slack);

    SUBCASE("stronger noise decays faster") {
        SpdeConfig strong = cfg;
        strong.noise = NoiseModel::linear(std::sqrt(18.0));
        const auto s2 = ensemble(s.grid, s.lap, strong);
        CHECK(s2.lyapunov_median < summary.lyapunov_median);
    }
}

TEST_CASE("ensemble with one path reproduces that path") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.noise = NoiseModel::linear(1.0);
    cfg.init = SpdeConfig::Init::Random;
    cfg.paths = 1;
    const auto summary = ensemble(s.grid, s.lap, cfg);
    REQUIRE(summary.paths.size() == 1);
    CHECK(summary.lyapunov_median == summary.paths[0].lyapunov_hat);
    CHECK(summary.lyapunov_mean == summary.paths[0].lyapunov_hat);
}

TEST_CASE("ensemble is thread-count invariant") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.noise = NoiseModel::linear(2.0);
    cfg.init = SpdeConfig::Init::Random;
    cfg.T = 2.0;
    cfg.paths = 6;
    const auto a = ensemble(s.grid, s.lap, cfg, 1);
    const auto b = ensemble(s.grid, s.lap, cfg, 4);
    CHECK(a.lyapunov_median == b.lyapunov_median);
    for (std::size_t p = 0; p < a.paths.size(); ++p) CHECK(a.paths[p].norm_sq == b.paths[p].norm_sq);
}

TEST_CASE("unstable deterministic ensemble never decays") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.init = SpdeConfig::Init::Random;
    cfg.T = 10.0;
    cfg.paths = 4;
    const auto summary = ensemble(s.grid, s.lap, cfg);
    CHECK(summary.decayed_fraction == 0.0);
}

TEST_CASE("pure decay at beta = 0") {
    const Setup s(16);
    SpdeConfig cfg = base_config();
    cfg.beta = 0.0;
    cfg.T = 2.0;
    cfg.burn_in = 0.0;
    const auto stats = simulate_path(s.grid, s.lap, cfg, 0, &s.eig.phi1, {}, s.eig.lambda1);
    CHECK(stats.lyapunov_hat <= -2.0 * s.eig.lambda1 + 0.01);
}

TEST_CASE("ito decomposition residual shrinks under dt refinement") {
    const Setup s(16);
    SpdeConfig coarse = base_config();
    coarse.noise = NoiseModel::linear(std::sqrt(12.0));
    coarse.T = 1.0;
    coarse.dt = 0.02;
    SpdeConfig fine = coarse;
    fine.dt = 0.01;

    double res_coarse = 0.0, res_fine = 0.0;
    for (int p = 0; p < 8; ++p) {
        // Couple the two discretizations through the same Brownian path.
        NormalStream stream(31, static_cast<std::uint64_t>(p));
        const int n_fine = static_cast<int>(std::llround(fine.T / fine.dt));
        std::vector<double> dw_fine(static_cast<std::size_t>(n_fine));
        for (double& dw : dw_fine) dw = stream.wiener_increment(fine.dt);
        std::vector<double> dw_coarse(static_cast<std::size_t>(n_fine / 2));
        for (std::size_t k = 0; k < dw_coarse.size(); ++k) dw_coarse[k] = dw_fine[2 * k] + dw_fine[2 * k + 1];

        const auto a = simulate_path(s.grid, s.lap, coarse, p, &s.eig.phi1, dw_coarse, s.eig.lambda1);
        const auto b = simulate_path(s.grid, s.lap, fine, p, &s.eig.phi1, dw_fine, s.eig.lambda1);
        res_coarse += ito_decomposition_residual(a);
        res_fine += ito_decomposition_residual(b);
    }
    CHECK(res_coarse / res_fine >= 1.2);
}

TEST_CASE("config validation") {
    SpdeConfig cfg = base_config();
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
    cfg = base_config();
    cfg.burn_in = 2.0;  // beyond T = 1
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
    cfg = base_config();
    cfg.init_norm = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
}
