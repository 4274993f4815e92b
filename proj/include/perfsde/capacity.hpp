#pragma once

#include <vector>

#include "perfsde/domain.hpp"
#include "perfsde/laplacian.hpp"

namespace perfsde {

/// Discrete capacity of a hole relative to the outer domain: the Dirichlet
/// energy of the capacitary potential (1 on the hole, 0 on the outer
/// boundary, discretely harmonic in between).
struct CapacityResult {
    double value = 0.0;
    std::vector<double> potential;  // nodal values on the un-perforated grid of the outer domain
    int cg_iterations = 0;
    double cg_residual = 0.0;
};

struct CapacityOptions {
    double cg_tol = 1e-10;
    int cg_max_iter = 200000;
};

/// spec must contain exactly one hole. The grid is built on the outer domain
/// alone; nodes inside the hole closure are clamped to 1.
CapacityResult capacity(const DomainSpec& spec, int resolution, const CapacityOptions& opts = {});

/// Leading-order small-hole capacity of an eps-ball: 2*pi / (-log eps) in 2D,
/// 4*pi*eps in 3D. Throws InvalidEps for eps >= 1 in 2D.
double ball_capacity_asymptotic(double eps, int dimension);

/// Capacity on the (resolution, 2*resolution) pair, Richardson-combined with
/// order p = 1. Never returns a negative value.
double richardson_capacity(const DomainSpec& spec, int resolution, const CapacityOptions& opts = {});

}  // namespace perfsde
