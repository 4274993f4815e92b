#pragma once

#include <vector>

#include "perfsde/laplacian.hpp"

namespace perfsde {

/// First Dirichlet eigenpair. phi1 is normalized to l2_norm_sq = 1 and
/// sign-flipped so the largest-magnitude entry is positive.
struct EigenResult {
    double lambda1 = 0.0;
    std::vector<double> phi1;
    double residual = 0.0;  // ||A phi - lambda phi|| / ||phi||
    int iterations = 0;
};

struct EigenOptions {
    double tol = 1e-8;
    int max_iter = 500;
    int cg_max_iter = 200000;
};

/// Inverse power iteration with CG inner solves; lambda is the Rayleigh
/// quotient. Requires a connected active set (throws NotConnected).
EigenResult first_eigenpair(const DiscreteLaplacian& lap, const EigenOptions& opts = {});

/// Second eigenvalue by inverse iteration deflated against phi1.
double second_eigenvalue(const DiscreteLaplacian& lap, const EigenResult& first, const EigenOptions& opts = {});

/// (2^p * fine - coarse) / (2^p - 1). p in {1,2}.
double richardson_combine(double coarse, double fine, int p);

/// Eigenvalues on a coarse/fine grid pair (h_fine = h_coarse / 2) combined by
/// Richardson extrapolation. Throws ResolutionMismatch.
double richardson_lambda(const DiscreteLaplacian& coarse, const DiscreteLaplacian& fine, int p,
                         const EigenOptions& opts = {});

}  // namespace perfsde
