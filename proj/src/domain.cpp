#include "perfsde/domain.hpp"

#include <cmath>
#include <cstddef>
#include <queue>
#include <string>

namespace perfsde {

namespace {

double dist2(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        const double diff = a[static_cast<std::size_t>(d)] - b[static_cast<std::size_t>(d)];
        s += diff * diff;
    }
    return s;
}

}  // namespace

OuterShape OuterShape::box(Point lo, Point hi) {
    OuterShape s;
    s.kind = OuterKind::Box;
    s.lo = lo;
    s.hi = hi;
    return s;
}

OuterShape OuterShape::ball(Point center, double radius) {
    OuterShape s;
    s.kind = OuterKind::Ball;
    s.center = center;
    s.radius = radius;
    return s;
}

void DomainSpec::validate() const {
    if (dimension != 2 && dimension != 3)
        throw InvalidSpec("domain: dimension must be 2 or 3, got " + std::to_string(dimension));
    if (outer.kind == OuterKind::Box) {
        for (int d = 0; d < dimension; ++d) {
            const auto dd = static_cast<std::size_t>(d);
            if (!(outer.lo[dd] < outer.hi[dd]))
                throw InvalidSpec("domain: box has empty extent along axis " + std::to_string(d));
        }
    } else {
        if (!(outer.radius > 0.0)) throw InvalidSpec("domain: ball radius must be positive");
    }
    for (std::size_t i = 0; i < holes.size(); ++i) {
        const HoleSpec& h = holes[i];
        if (!(h.eps > 0.0)) throw InvalidSpec("domain: hole size must be positive");
        // Strictly inside: the circumscribing eps-ball must stay off the outer boundary.
        if (outer.kind == OuterKind::Box) {
            for (int d = 0; d < dimension; ++d) {
                const auto dd = static_cast<std::size_t>(d);
                if (!(h.center[dd] - h.eps > outer.lo[dd] && h.center[dd] + h.eps < outer.hi[dd]))
                    throw InvalidSpec("domain: hole " + std::to_string(i) + " not strictly inside outer box");
            }
        } else {
            const double r = std::sqrt(dist2(h.center, outer.center, dimension));
            if (!(r + h.eps < outer.radius))
                throw InvalidSpec("domain: hole " + std::to_string(i) + " not strictly inside outer ball");
        }
    }
    for (std::size_t i = 0; i < holes.size(); ++i) {
        for (std::size_t j = i + 1; j < holes.size(); ++j) {
            // Disjointness via the circumscribing eps-balls.
            const double d = std::sqrt(dist2(holes[i].center, holes[j].center, dimension));
            if (!(d > holes[i].eps + holes[j].eps))
                throw OverlappingHoles("domain: holes " + std::to_string(i) + " and " + std::to_string(j) +
                                       " overlap");
        }
    }
}

double DomainSpec::min_hole_eps() const {
    double m = 0.0;
    for (const HoleSpec& h : holes) m = (m == 0.0 || h.eps < m) ? h.eps : m;
    return m;
}

bool DomainSpec::inside_outer(const Point& p, double tol) const {
    if (outer.kind == OuterKind::Box) {
        for (int d = 0; d < dimension; ++d) {
            const auto dd = static_cast<std::size_t>(d);
            if (!(p[dd] > outer.lo[dd] + tol && p[dd] < outer.hi[dd] - tol)) return false;
        }
        return true;
    }
    const double r = std::sqrt(dist2(p, outer.center, dimension));
    return r < outer.radius - tol;
}

bool DomainSpec::inside_hole_closure(std::size_t i, const Point& p, double tol) const {
    const HoleSpec& h = holes[i];
    if (h.shape == HoleShape::Ball) {
        return std::sqrt(dist2(p, h.center, dimension)) <= h.eps + tol;
    }
    const double half = h.eps / std::sqrt(static_cast<double>(dimension));
    for (int d = 0; d < dimension; ++d) {
        const auto dd = static_cast<std::size_t>(d);
        if (std::abs(p[dd] - h.center[dd]) > half + tol) return false;
    }
    return true;
}

bool DomainSpec::active_point(const Point& p, double tol) const {
    if (!inside_outer(p, tol)) return false;
    for (std::size_t i = 0; i < holes.size(); ++i)
        if (inside_hole_closure(i, p, tol)) return false;
    return true;
}

Point DomainSpec::bbox_lo() const {
    if (outer.kind == OuterKind::Box) return outer.lo;
    Point p = outer.center;
    for (int d = 0; d < dimension; ++d) p[static_cast<std::size_t>(d)] -= outer.radius;
    return p;
}

Point DomainSpec::bbox_hi() const {
    if (outer.kind == OuterKind::Box) return outer.hi;
    Point p = outer.center;
    for (int d = 0; d < dimension; ++d) p[static_cast<std::size_t>(d)] += outer.radius;
    return p;
}

DomainSpec DomainSpec::without_holes() const {
    DomainSpec s = *this;
    s.holes.clear();
    return s;
}

DomainSpec DomainSpec::with_single_hole(std::size_t i) const {
    DomainSpec s = *this;
    s.holes = {holes.at(i)};
    return s;
}

Grid::Grid(const DomainSpec& spec, int resolution) : spec_(spec), dim_(spec.dimension), resolution_(resolution) {
    spec_.validate();
    if (resolution < 1) throw InvalidSpec("grid: resolution must be positive");
    h_ = 1.0 / static_cast<double>(resolution);
    if (!spec_.holes.empty()) {
        const double eps = spec_.min_hole_eps();
        if (h_ >= eps / 2.0)
            throw UnresolvedHole("grid: spacing h=" + std::to_string(h_) + " does not resolve hole size eps=" +
                                 std::to_string(eps));
    }

    origin_ = spec_.bbox_lo();
    const Point hi = spec_.bbox_hi();
    for (int d = 0; d < dim_; ++d) {
        const auto dd = static_cast<std::size_t>(d);
        const double extent = hi[dd] - origin_[dd];
        npts_[dd] = static_cast<int>(std::floor(extent * resolution + 1e-9)) + 1;
    }

    const double tol = 1e-9 * h_;  // boundary-exact points classify as inactive
    index_map_.assign(static_cast<std::size_t>(npts_[0]) * npts_[1] * npts_[2], -1);
    for (int k = 0; k < npts_[2]; ++k) {
        for (int j = 0; j < npts_[1]; ++j) {
            for (int i = 0; i < npts_[0]; ++i) {
                const Point p{origin_[0] + i * h_, origin_[1] + j * h_, origin_[2] + k * h_};
                if (spec_.active_point(p, tol)) {
                    index_map_[flat(i, j, k)] = static_cast<std::int32_t>(active_lattice_.size());
                    active_lattice_.push_back({i, j, k});
                }
            }
        }
    }
    if (active_lattice_.empty()) throw EmptyDomain("grid: no active nodes at resolution " + std::to_string(resolution));
}

Point Grid::position(int idx) const {
    const auto& l = active_lattice_[static_cast<std::size_t>(idx)];
    return {origin_[0] + l[0] * h_, origin_[1] + l[1] * h_, origin_[2] + l[2] * h_};
}

int Grid::index_at(int i, int j, int k) const {
    if (i < 0 || i >= npts_[0] || j < 0 || j >= npts_[1] || k < 0 || k >= npts_[2]) return -1;
    return index_map_[flat(i, j, k)];
}

int Grid::neighbor(int idx, int axis, int dir) const {
    auto l = active_lattice_[static_cast<std::size_t>(idx)];
    l[static_cast<std::size_t>(axis)] += dir;
    return index_at(l[0], l[1], l[2]);
}

Grid build_grid(const DomainSpec& spec, int resolution) { return Grid(spec, resolution); }

int connected_components(const Grid& grid) {
    const int n = grid.active_count();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    int components = 0;
    std::queue<int> queue;
    for (int start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        ++components;
        seen[static_cast<std::size_t>(start)] = 1;
        queue.push(start);
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop();
            for (int axis = 0; axis < grid.dimension(); ++axis) {
                for (int dir : {-1, 1}) {
                    const int w = grid.neighbor(v, axis, dir);
                    if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
                        seen[static_cast<std::size_t>(w)] = 1;
                        queue.push(w);
                    }
                }
            }
        }
    }
    return components;
}

}  // namespace perfsde
