#include "perfsde/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "perfsde/eigensolver.hpp"
#include "perfsde/sparse.hpp"

namespace perfsde {

CapacityResult capacity(const DomainSpec& spec, int resolution, const CapacityOptions& opts) {
    spec.validate();
    if (spec.holes.size() != 1) throw InvalidSpec("capacity: spec must contain exactly one hole");

    const Grid grid(spec.without_holes(), resolution);
    const int n = grid.active_count();
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double tol = 1e-9 * h;

    // Classify nodes of the outer-domain grid: clamped (inside the hole
    // closure, value 1) vs free unknowns.
    std::vector<char> clamped(static_cast<std::size_t>(n), 0);
    int free_count = 0;
    std::vector<int> free_index(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (spec.inside_hole_closure(0, grid.position(i), tol))
            clamped[static_cast<std::size_t>(i)] = 1;
        else
            free_index[static_cast<std::size_t>(i)] = free_count++;
    }

    CapacityResult out;
    out.potential.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        if (clamped[static_cast<std::size_t>(i)]) out.potential[static_cast<std::size_t>(i)] = 1.0;

    if (free_count > 0 && free_count < n) {
        // Reduced Laplace system over free nodes; clamped neighbors feed the rhs.
        std::vector<std::size_t> offsets(static_cast<std::size_t>(free_count) + 1, 0);
        std::vector<int> cols;
        std::vector<double> vals;
        std::vector<double> rhs(static_cast<std::size_t>(free_count), 0.0);
        cols.reserve(static_cast<std::size_t>(free_count) * (2 * grid.dimension() + 1));
        vals.reserve(cols.capacity());
        std::array<int, 7> row_cols{};
        for (int i = 0; i < n; ++i) {
            const int fi = free_index[static_cast<std::size_t>(i)];
            if (fi < 0) continue;
            int count = 0;
            for (int axis = 0; axis < grid.dimension(); ++axis)
                for (int dir : {-1, 1}) {
                    const int nb = grid.neighbor(i, axis, dir);
                    if (nb < 0) continue;  // outer boundary: value 0
                    if (clamped[static_cast<std::size_t>(nb)])
                        rhs[static_cast<std::size_t>(fi)] += inv_h2;
                    else
                        row_cols[static_cast<std::size_t>(count++)] = free_index[static_cast<std::size_t>(nb)];
                }
            row_cols[static_cast<std::size_t>(count++)] = fi;
            std::sort(row_cols.begin(), row_cols.begin() + count);
            for (int k = 0; k < count; ++k) {
                const int c = row_cols[static_cast<std::size_t>(k)];
                cols.push_back(c);
                vals.push_back(c == fi ? 2.0 * grid.dimension() * inv_h2 : -inv_h2);
            }
            offsets[static_cast<std::size_t>(fi) + 1] = cols.size();
        }
        const SparseMatrix a(free_count, std::move(offsets), std::move(cols), std::move(vals));
        CgOptions cg;
        cg.tol = opts.cg_tol;
        cg.max_iter = opts.cg_max_iter;
        const CgResult solved = cg_solve(a, rhs, cg);
        out.cg_iterations = solved.iterations;
        out.cg_residual = solved.residual;
        for (int i = 0; i < n; ++i) {
            const int fi = free_index[static_cast<std::size_t>(i)];
            if (fi >= 0) out.potential[static_cast<std::size_t>(i)] = solved.x[static_cast<std::size_t>(fi)];
        }
    }

    out.value = dirichlet_energy(grid, out.potential);
    return out;
}

double ball_capacity_asymptotic(double eps, int dimension) {
    if (!(eps > 0.0)) throw InvalidEps("capacity: eps must be positive");
    if (dimension == 2) {
        if (eps >= 1.0) throw InvalidEps("capacity: 2D asymptotic formula requires eps < 1");
        return 2.0 * std::numbers::pi / (-std::log(eps));
    }
    if (dimension == 3) return 4.0 * std::numbers::pi * eps;
    throw InvalidSpec("capacity: dimension must be 2 or 3");
}

double richardson_capacity(const DomainSpec& spec, int resolution, const CapacityOptions& opts) {
    const double coarse = capacity(spec, resolution, opts).value;
    const double fine = capacity(spec, 2 * resolution, opts).value;
    return std::max(0.0, richardson_combine(coarse, fine, 1));
}

}  // namespace perfsde
