#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "perfsde/errors.hpp"

namespace perfsde {

using Point = std::array<double, 3>;

enum class HoleShape { Ball, Cube };

/// A small excised set of size eps centered at `center`. A cube hole is
/// inscribed in its eps-ball (half-side eps/sqrt(n)), so it is always
/// contained in the ball of the same size.
struct HoleSpec {
    Point center{0.0, 0.0, 0.0};
    double eps = 0.0;
    HoleShape shape = HoleShape::Ball;
};

enum class OuterKind { Box, Ball };

struct OuterShape {
    OuterKind kind = OuterKind::Box;
    // Box
    Point lo{0.0, 0.0, 0.0};
    Point hi{1.0, 1.0, 1.0};
    // Ball
    Point center{0.0, 0.0, 0.0};
    double radius = 0.0;

    static OuterShape box(Point lo, Point hi);
    static OuterShape ball(Point center, double radius);
};

/// Outer domain plus a list of holes. The active region is the open outer
/// shape minus the closed holes.
struct DomainSpec {
    int dimension = 2;
    OuterShape outer;
    std::vector<HoleSpec> holes;

    /// Throws InvalidSpec / OverlappingHoles when the geometric invariants
    /// fail: holes pairwise disjoint and strictly inside the outer shape.
    void validate() const;

    double min_hole_eps() const;

    /// Strictly inside the open outer shape (margin `tol` off the boundary).
    bool inside_outer(const Point& p, double tol = 0.0) const;
    /// Inside or on the boundary of hole i (margin `tol` outward).
    bool inside_hole_closure(std::size_t i, const Point& p, double tol = 0.0) const;
    /// Point of the open perforated domain.
    bool active_point(const Point& p, double tol = 0.0) const;

    Point bbox_lo() const;
    Point bbox_hi() const;

    DomainSpec without_holes() const;
    DomainSpec with_single_hole(std::size_t i) const;
};

/// Masked structured grid over the perforated domain. Lattice points lie at
/// origin + k*h; a point is active iff it is strictly inside the outer shape
/// and outside every hole closure. Immutable after construction.
class Grid {
  public:
    Grid(const DomainSpec& spec, int resolution);

    int dimension() const { return dim_; }
    double spacing() const { return h_; }
    int resolution() const { return resolution_; }
    int active_count() const { return static_cast<int>(active_lattice_.size()); }
    const DomainSpec& spec() const { return spec_; }

    Point position(int idx) const;
    std::array<int, 3> lattice_of(int idx) const { return active_lattice_[static_cast<std::size_t>(idx)]; }

    /// Active index at lattice coordinates, or -1 (inactive / out of range).
    int index_at(int i, int j, int k) const;

    /// Neighbor of active node `idx` one step along `axis` in direction
    /// `dir` (+1/-1). Returns the active index, or -1 for a
    /// Dirichlet-exterior neighbor.
    int neighbor(int idx, int axis, int dir) const;

    const std::array<int, 3>& npts() const { return npts_; }
    const Point& origin() const { return origin_; }

  private:
    DomainSpec spec_;
    int dim_;
    int resolution_;
    double h_;
    Point origin_{};
    std::array<int, 3> npts_{1, 1, 1};
    std::vector<std::int32_t> index_map_;              // full lattice -> active index or -1
    std::vector<std::array<int, 3>> active_lattice_;   // active index -> lattice coords

    std::size_t flat(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * npts_[1] + static_cast<std::size_t>(j)) * npts_[0] +
               static_cast<std::size_t>(i);
    }
};

Grid build_grid(const DomainSpec& spec, int resolution);

/// Number of connected components of the active set under lattice adjacency.
int connected_components(const Grid& grid);

}  // namespace perfsde
