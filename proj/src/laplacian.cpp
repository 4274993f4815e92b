#include "perfsde/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace perfsde {

DiscreteLaplacian assemble(const Grid& grid) {
    const int n = grid.active_count();
    const int dim = grid.dimension();
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double diag = 2.0 * dim * inv_h2;

    std::vector<std::size_t> offsets(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(static_cast<std::size_t>(n) * (2 * dim + 1));
    vals.reserve(static_cast<std::size_t>(n) * (2 * dim + 1));

    std::array<int, 7> row_cols{};
    for (int i = 0; i < n; ++i) {
        int count = 0;
        for (int axis = 0; axis < dim; ++axis)
            for (int dir : {-1, 1}) {
                const int nb = grid.neighbor(i, axis, dir);
                if (nb >= 0) row_cols[static_cast<std::size_t>(count++)] = nb;
            }
        row_cols[static_cast<std::size_t>(count++)] = i;
        std::sort(row_cols.begin(), row_cols.begin() + count);
        for (int k = 0; k < count; ++k) {
            const int c = row_cols[static_cast<std::size_t>(k)];
            cols.push_back(c);
            vals.push_back(c == i ? diag : -inv_h2);
        }
        offsets[static_cast<std::size_t>(i) + 1] = cols.size();
    }
    return DiscreteLaplacian{SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals)), h, dim, &grid};
}

double l2_norm_sq(const Grid& grid, std::span<const double> u) {
    if (u.size() != static_cast<std::size_t>(grid.active_count()))
        throw DimensionMismatch("l2_norm_sq: vector length " + std::to_string(u.size()) + " != active count " +
                                std::to_string(grid.active_count()));
    double s = 0.0;
    for (const double v : u) s += v * v;
    return std::pow(grid.spacing(), grid.dimension()) * s;
}

double dirichlet_energy(const Grid& grid, std::span<const double> u) {
    if (u.size() != static_cast<std::size_t>(grid.active_count()))
        throw DimensionMismatch("dirichlet_energy: vector length mismatch");
    const int n = grid.active_count();
    const int dim = grid.dimension();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ui = u[static_cast<std::size_t>(i)];
        for (int axis = 0; axis < dim; ++axis) {
            // Interior edges counted once (positive direction); boundary edges
            // in both directions, since the exterior endpoint owns none.
            const int up = grid.neighbor(i, axis, +1);
            if (up >= 0) {
                const double d = ui - u[static_cast<std::size_t>(up)];
                s += d * d;
            } else {
                s += ui * ui;
            }
            if (grid.neighbor(i, axis, -1) < 0) s += ui * ui;
        }
    }
    return std::pow(grid.spacing(), grid.dimension() - 2) * s;
}

double interpolate(const Grid& grid, std::span<const double> u, const Point& p) {
    const int dim = grid.dimension();
    const double h = grid.spacing();
    std::array<int, 3> cell{0, 0, 0};
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int d = 0; d < dim; ++d) {
        const auto dd = static_cast<std::size_t>(d);
        const double s = (p[dd] - grid.origin()[dd]) / h;
        cell[dd] = static_cast<int>(std::floor(s));
        if (cell[dd] >= grid.npts()[dd] - 1) cell[dd] = grid.npts()[dd] - 2;
        if (cell[dd] < 0) cell[dd] = 0;
        w[dd] = s - cell[dd];
    }
    const int kmax = dim == 3 ? 1 : 0;
    double value = 0.0;
    for (int dk = 0; dk <= kmax; ++dk)
        for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) {
                const int idx = grid.index_at(cell[0] + di, cell[1] + dj, cell[2] + dk);
                if (idx < 0) continue;  // Dirichlet corner: value 0
                double weight = (di ? w[0] : 1.0 - w[0]) * (dj ? w[1] : 1.0 - w[1]);
                if (dim == 3) weight *= dk ? w[2] : 1.0 - w[2];
                value += weight * u[static_cast<std::size_t>(idx)];
            }
    return value;
}

}  // namespace perfsde
