#pragma once

#include <span>
#include <vector>

#include "perfsde/domain.hpp"
#include "perfsde/sparse.hpp"

namespace perfsde {

/// Discrete Dirichlet Laplacian on a masked grid: 5-point (2D) / 7-point (3D)
/// stencil with homogeneous Dirichlet elimination. Diagonal 2n/h^2,
/// off-diagonal -1/h^2 to active neighbors. The grid must outlive this object.
struct DiscreteLaplacian {
    SparseMatrix matrix;
    double h = 0.0;
    int dimension = 0;
    const Grid* grid = nullptr;
};

DiscreteLaplacian assemble(const Grid& grid);

/// h^n * sum u_i^2 (discrete L^2 norm squared).
double l2_norm_sq(const Grid& grid, std::span<const double> u);

/// h^{n-2} * sum over lattice edges of (u_i - u_j)^2, with value 0 at
/// Dirichlet-exterior neighbors. Equals h^n * u^T A u exactly.
double dirichlet_energy(const Grid& grid, std::span<const double> u);

/// Multilinear interpolation of a nodal vector at a point. Inactive cell
/// corners contribute the Dirichlet value 0.
double interpolate(const Grid& grid, std::span<const double> u, const Point& p);

}  // namespace perfsde
