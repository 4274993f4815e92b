#include "perfsde/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace perfsde {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct IterationState {
    double lambda = 0.0;
    double residual = 0.0;
};

/// One Rayleigh/residual evaluation: ax = A x for unit x.
IterationState evaluate(const SparseMatrix& a, const std::vector<double>& x, std::vector<double>& ax) {
    a.matvec(x, ax);
    IterationState s;
    s.lambda = dot(x, ax);  // x has unit Euclidean norm
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = ax[i] - s.lambda * x[i];
        r2 += d * d;
    }
    s.residual = std::sqrt(r2);
    return s;
}

EigenResult inverse_iteration(const DiscreteLaplacian& lap, const EigenOptions& opts,
                              const std::vector<double>* deflate) {
    const SparseMatrix& a = lap.matrix;
    const auto n = static_cast<std::size_t>(a.size());
    if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw InvalidSpec("eigen: tol must be in (0,1)");

    // A positive constant start cannot be orthogonal to the Perron vector.
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    auto project = [&](std::vector<double>& v) {
        if (deflate == nullptr) return;
        const double c = dot(v, *deflate) / dot(*deflate, *deflate);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * (*deflate)[i];
    };
    if (deflate != nullptr) {
        // Deflated start: perturb away from the constant before projecting.
        for (std::size_t i = 0; i < n; ++i) x[i] *= 1.0 + 0.5 * std::sin(static_cast<double>(i));
        project(x);
        const double nx = norm(x);
        if (nx == 0.0) throw DegenerateStart("eigen: deflated start vanished");
        for (double& v : x) v /= nx;
    }

    std::vector<double> ax(n);
    IterationState st = evaluate(a, x, ax);
    std::vector<double> y(n);

    for (int it = 1; it <= opts.max_iter; ++it) {
        const double inner_tol = std::clamp(0.01 * st.residual / std::max(st.lambda, 1.0),
                                            std::max(opts.tol * opts.tol, 1e-13), 0.1);
        // Warm start: x / lambda approximates A^{-1} x near convergence.
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / st.lambda;
        CgOptions cg;
        cg.tol = inner_tol;
        cg.max_iter = opts.cg_max_iter;
        cg.x0 = &y;
        CgResult solved = cg_solve(a, x, cg);
        x = std::move(solved.x);
        project(x);
        const double nx = norm(x);
        if (!(nx > 0.0) || !std::isfinite(nx)) throw NotFinite("eigen: iterate collapsed");
        for (double& v : x) v /= nx;

        const double lambda_prev = st.lambda;
        st = evaluate(a, x, ax);
        const bool rq_settled = std::abs(st.lambda - lambda_prev) <= opts.tol * opts.tol * std::max(1.0, std::abs(st.lambda));
        if (rq_settled && st.residual <= opts.tol) {
            EigenResult out;
            out.lambda1 = st.lambda;
            out.phi1 = std::move(x);
            out.residual = st.residual;
            out.iterations = it;
            return out;
        }
    }
    throw MaxIterations("eigen: no convergence within " + std::to_string(opts.max_iter) + " iterations");
}

}  // namespace

EigenResult first_eigenpair(const DiscreteLaplacian& lap, const EigenOptions& opts) {
    if (connected_components(*lap.grid) != 1)
        throw NotConnected("eigen: active set is not connected");
    EigenResult out = inverse_iteration(lap, opts, nullptr);

    // Sign: flip so the largest-magnitude entry is positive.
    double best = 0.0;
    for (const double v : out.phi1)
        if (std::abs(v) > std::abs(best)) best = v;
    if (best < 0.0)
        for (double& v : out.phi1) v = -v;

    // Normalize in the discrete L^2 inner product.
    const double nsq = l2_norm_sq(*lap.grid, out.phi1);
    const double scale = 1.0 / std::sqrt(nsq);
    for (double& v : out.phi1) v *= scale;
    return out;
}

double second_eigenvalue(const DiscreteLaplacian& lap, const EigenResult& first, const EigenOptions& opts) {
    EigenResult out = inverse_iteration(lap, opts, &first.phi1);
    return out.lambda1;
}

double richardson_combine(double coarse, double fine, int p) {
    if (p != 1 && p != 2) throw InvalidSpec("richardson: order must be 1 or 2");
    const double w = p == 1 ? 2.0 : 4.0;
    return (w * fine - coarse) / (w - 1.0);
}

double richardson_lambda(const DiscreteLaplacian& coarse, const DiscreteLaplacian& fine, int p,
                         const EigenOptions& opts) {
    if (std::abs(coarse.h - 2.0 * fine.h) > 1e-12 * coarse.h)
        throw ResolutionMismatch("richardson: fine spacing must be half the coarse spacing");
    const double lc = first_eigenpair(coarse, opts).lambda1;
    const double lf = first_eigenpair(fine, opts).lambda1;
    return richardson_combine(lc, lf, p);
}

}  // namespace perfsde
