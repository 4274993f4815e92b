#include "perfsde/spde.hpp"

#include "perfsde/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace perfsde {

void SpdeConfig::validate() const {
    if (!(dt > 0.0 && dt < T)) throw InvalidSpec("spde: require 0 < dt < T");
    if (!(effective_burn_in() < T)) throw InvalidSpec("spde: burn-in must be below the horizon");
    if (!(init_norm > 0.0)) throw InvalidSpec("spde: initial data must be nonzero");
    if (paths < 1) throw InvalidSpec("spde: need at least one path");
    if (!(sample_dt > 0.0)) throw InvalidSpec("spde: sample interval must be positive");
}

namespace {

/// Shared per-path integrator state. Holds the implicit matrix I + dt A and
/// the workspaces for one path. The diffusion factor c/(1 + dt lambda) with
/// c = exp(-dt lambda1) (1 + dt lambda1) is exact on the phi1 mode (so the
/// measured exponent carries no time-stepping bias) and still damps stiff
/// modes like backward Euler; c < 1, so the linear step stays contractive.
class Stepper {
  public:
    Stepper(const Grid& grid, const DiscreteLaplacian& lap, const SpdeConfig& cfg, double lambda1)
        : grid_(grid),
          lap_(lap),
          cfg_(cfg),
          implicit_(SparseMatrix::axpy(SparseMatrix::identity(lap.matrix.size()), cfg.dt, lap.matrix)),
          log_c2_(2.0 * (std::log1p(lambda1 * cfg.dt) - lambda1 * cfg.dt)),
          hn_(std::pow(lap.h, lap.dimension)) {
        w_.resize(static_cast<std::size_t>(lap.matrix.size()));
    }

    struct Rates {
        double grad = 0.0;       // 2 ||grad u||^2 / ||u||^2
        double nonlinear = 0.0;  // 2 <f(u),u> / ||u||^2
        double ito = 0.0;        // ||h||^2 / ||u||^2
        double uh = 0.0;         // <u,h> / ||u||^2
    };

    /// Left-point rates of the log-norm decomposition for the normalized
    /// state v (l2_norm_sq(v) = 1) at squared norm exp(log_norm_sq).
    Rates rates(const std::vector<double>& v, double log_norm_sq, double t) const {
        Rates r;
        r.grad = 2.0 * dirichlet_energy(grid_, v);
        const double s2 = std::exp(log_norm_sq);
        const double s = std::sqrt(s2);
        double sum_v4 = 0.0, sum_m2v2 = 0.0, sum_mv2 = 0.0;
        for (const double vi : v) {
            const double vi2 = vi * vi;
            sum_v4 += vi2 * vi2;
            const double m = cfg_.noise.multiplier(t, s * vi);
            sum_m2v2 += m * m * vi2;
            sum_mv2 += m * vi2;
        }
        r.nonlinear = 2.0 * (s2 * hn_ * sum_v4 - cfg_.beta);
        r.ito = hn_ * sum_m2v2;
        r.uh = hn_ * sum_mv2;
        return r;
    }

    /// Advances the normalized state in place and folds the norm change into
    /// log_norm_sq. Returns false when the state degenerates to zero.
    bool advance(std::vector<double>& v, double& log_norm_sq, double t, double dW) {
        const double dt = cfg_.dt;
        const double s2 = std::exp(log_norm_sq);
        const double s = std::sqrt(s2);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double vi = v[i];
            const double m = cfg_.noise.multiplier(t, s * vi);
            const double exponent = (cfg_.beta - s2 * vi * vi) * dt + m * dW - 0.5 * m * m * dt;
            w_[i] = vi * std::exp(exponent);
        }
        CgOptions cg;
        cg.tol = cfg_.cg_tol;
        cg.max_iter = cfg_.cg_max_iter;
        cg.x0 = &w_;
        CgResult solved = cg_solve(implicit_, w_, cg);
        const double n2 = l2_norm_sq(grid_, solved.x);
        if (!std::isfinite(n2)) throw NotFinite("spde: state blew up (reduce dt)");
        if (n2 <= 0.0) return false;
        log_norm_sq += std::log(n2) + log_c2_;
        const double scale = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = solved.x[i] * scale;
        return true;
    }

  private:
    const Grid& grid_;
    const DiscreteLaplacian& lap_;
    const SpdeConfig& cfg_;
    SparseMatrix implicit_;
    double log_c2_;
    double hn_;
    std::vector<double> w_;
};

}  // namespace

std::vector<double> spde_step(const DiscreteLaplacian& lap, const SpdeConfig& cfg, std::span<const double> u,
                              double t, double dW, double lambda1) {
    const Grid& grid = *lap.grid;
    if (u.size() != static_cast<std::size_t>(grid.active_count())) throw DimensionMismatch("spde: state length mismatch");
    const double nsq = l2_norm_sq(grid, u);
    if (nsq == 0.0) return std::vector<double>(u.size(), 0.0);  // zero state is invariant (H0)

    Stepper stepper(grid, lap, cfg, lambda1);
    double log_norm_sq = std::log(nsq);
    const double scale = 1.0 / std::sqrt(nsq);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] * scale;
    if (!stepper.advance(v, log_norm_sq, t, dW)) return std::vector<double>(u.size(), 0.0);
    const double s = std::exp(0.5 * log_norm_sq);
    for (double& vi : v) vi *= s;
    return v;
}

std::vector<double> initial_state(const Grid& grid, const SpdeConfig& cfg, NormalStream& stream,
                                  const std::vector<double>* phi1) {
    const auto n = static_cast<std::size_t>(grid.active_count());
    std::vector<double> u(n);
    if (cfg.init == SpdeConfig::Init::Eigenfunction) {
        if (phi1 == nullptr || phi1->size() != n)
            throw InvalidSpec("spde: eigenfunction initial data requires phi1 on this grid");
        for (std::size_t i = 0; i < n; ++i) u[i] = cfg.init_norm * (*phi1)[i];
        return u;
    }
    for (std::size_t i = 0; i < n; ++i) u[i] = stream.normal();
    const double nsq = l2_norm_sq(grid, u);
    if (nsq == 0.0) throw DegenerateNorm("spde: random initial state vanished");
    const double scale = cfg.init_norm / std::sqrt(nsq);
    for (double& ui : u) ui *= scale;
    return u;
}

TrajectoryStats simulate_path(const Grid& grid, const DiscreteLaplacian& lap, const SpdeConfig& cfg, int path_id,
                              const std::vector<double>* phi1, std::span<const double> increments, double lambda1) {
    cfg.validate();
    const auto n_steps = static_cast<long>(std::llround(cfg.T / cfg.dt));
    if (!increments.empty() && increments.size() != static_cast<std::size_t>(n_steps))
        throw DimensionMismatch("spde: increment list must hold T/dt values");
    const long burn_step = std::clamp(static_cast<long>(std::llround(cfg.effective_burn_in() / cfg.dt)), 0L, n_steps - 1);
    const long sample_every = std::max(1L, static_cast<long>(std::llround(cfg.sample_dt / cfg.dt)));

    NormalStream stream(cfg.seed, static_cast<std::uint64_t>(path_id));
    std::vector<double> u = initial_state(grid, cfg, stream, phi1);

    TrajectoryStats stats;
    stats.path_id = path_id;
    stats.min_gradient_rate = std::numeric_limits<double>::infinity();
    stats.min_nonlinear_rate = std::numeric_limits<double>::infinity();
    stats.max_h1_excess = -std::numeric_limits<double>::infinity();

    double log_norm_sq = std::log(l2_norm_sq(grid, u));
    stats.log_norm_sq_initial = log_norm_sq;
    stats.log_norm_sq_burn_in = log_norm_sq;
    const double inv_nrm = std::exp(-0.5 * log_norm_sq);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] * inv_nrm;

    Stepper stepper(grid, lap, cfg, lambda1);
    auto record = [&](double t) {
        stats.times.push_back(t);
        stats.norm_sq.push_back(std::exp(log_norm_sq));
        stats.log_norm_sq.push_back(log_norm_sq);
        stats.accumulators.push_back(
            {stats.grad_term, stats.nonlinear_term, stats.ito_term, stats.qv_term, stats.martingale_term});
    };
    record(0.0);

    long step_idx = 0;
    for (; step_idx < n_steps; ++step_idx) {
        const double t = step_idx * cfg.dt;
        const double dW = increments.empty() ? stream.wiener_increment(cfg.dt) : increments[static_cast<std::size_t>(step_idx)];

        const Stepper::Rates r = stepper.rates(v, log_norm_sq, t);
        stats.grad_term += r.grad * cfg.dt;
        stats.nonlinear_term += r.nonlinear * cfg.dt;
        stats.ito_term += r.ito * cfg.dt;
        stats.qv_term += -2.0 * r.uh * r.uh * cfg.dt;
        stats.martingale_term += 2.0 * r.uh * dW;
        stats.min_gradient_rate = std::min(stats.min_gradient_rate, r.grad);
        stats.min_nonlinear_rate = std::min(stats.min_nonlinear_rate, r.nonlinear);
        stats.max_h1_excess = std::max(stats.max_h1_excess, r.ito - cfg.noise.gamma(t));

        if (!stepper.advance(v, log_norm_sq, t, dW)) {
            stats.degenerate = true;
            break;
        }
        if (step_idx + 1 == burn_step) stats.log_norm_sq_burn_in = log_norm_sq;
        if ((step_idx + 1) % sample_every == 0 || step_idx + 1 == n_steps) record((step_idx + 1) * cfg.dt);
    }

    stats.log_norm_sq_final = log_norm_sq;
    const double t_final = static_cast<double>(step_idx) * cfg.dt;
    const double t_burn = static_cast<double>(burn_step) * cfg.dt;
    stats.lyapunov_hat = t_final > t_burn
                             ? (stats.log_norm_sq_final - stats.log_norm_sq_burn_in) / (t_final - t_burn)
                             : 0.0;
    return stats;
}

EnsembleSummary ensemble(const Grid& grid, const DiscreteLaplacian& lap, const SpdeConfig& cfg, int threads) {
    cfg.validate();
    EnsembleSummary summary;

    EigenOptions eig_opts;
    const EigenResult eig = first_eigenpair(lap, eig_opts);
    summary.lambda1_grid = eig.lambda1;
    summary.decay_bound_value = decay_bound(cfg.beta, cfg.noise.gamma0(), cfg.noise.rho0(), eig.lambda1);
    summary.decay_rate_delta = summary.decay_bound_value < 0.0 ? -0.5 * summary.decay_bound_value : 0.0;

    summary.paths.resize(static_cast<std::size_t>(cfg.paths));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int p = next.fetch_add(1);
            if (p >= cfg.paths) return;
            summary.paths[static_cast<std::size_t>(p)] = simulate_path(grid, lap, cfg, p, &eig.phi1, {}, eig.lambda1);
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<double> lyap;
    lyap.reserve(summary.paths.size());
    int decayed = 0;
    double c_est = 0.0;
    const double decade_cut = 2.0 * std::log(1e-6);
    for (const TrajectoryStats& p : summary.paths) {
        lyap.push_back(p.lyapunov_hat);
        if (p.log_norm_sq_final - p.log_norm_sq_initial < decade_cut) ++decayed;
        for (std::size_t k = 0; k < p.times.size(); ++k) {
            const double log_ratio = p.log_norm_sq[k] - p.log_norm_sq_initial;
            c_est = std::max(c_est, std::exp(0.5 * log_ratio + summary.decay_rate_delta * p.times[k]));
        }
    }
    summary.decayed_fraction = static_cast<double>(decayed) / static_cast<double>(cfg.paths);
    summary.c_estimate = c_est;
    double mean = 0.0;
    for (const double l : lyap) mean += l;
    summary.lyapunov_mean = mean / static_cast<double>(lyap.size());
    std::sort(lyap.begin(), lyap.end());
    const std::size_t mid = lyap.size() / 2;
    summary.lyapunov_median = lyap.size() % 2 == 1 ? lyap[mid] : 0.5 * (lyap[mid - 1] + lyap[mid]);
    return summary;
}

double ito_decomposition_residual(const TrajectoryStats& stats) {
    const double predicted = -stats.grad_term - stats.nonlinear_term + stats.ito_term + stats.qv_term +
                             stats.martingale_term;
    return std::abs(stats.log_norm_sq_final - stats.log_norm_sq_initial - predicted);
}

}  // namespace perfsde
