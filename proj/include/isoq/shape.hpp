#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "isoq/polygon.hpp"
#include "isoq/vec.hpp"

namespace isoq {

struct Shape;

struct Ball {
    Vec center;
    double radius = 0;
};

struct AxisBox {
    Vec lo, hi;  // strictly ordered per coordinate
};

/// Simple counterclockwise polygon; only valid in dimension 2.
struct Polygon2D {
    Ring ring;
};

/// Axis-aligned occupancy grid. Cell (i_0, ..., i_{N-1}) spans
/// origin + h * [i, i+1] per coordinate; row-major order with the last
/// coordinate fastest.
struct VoxelGrid {
    Vec origin;
    double spacing = 0;
    std::array<int, kMaxDim> dims{};
    std::vector<uint8_t> occupancy;

    size_t cell_count() const;
    size_t index(const std::array<int, kMaxDim>& idx, int dim) const;
    Vec cell_center(size_t flat, int dim) const;
    size_t occupied_count() const;
};

struct UnionShape {
    std::vector<Shape> parts;
    bool disjoint = false;  // caller asserts pairwise intersection volume 0
};

/// A measurable subset of R^N. Values are immutable after construction;
/// every operation on shapes is a pure function.
struct Shape {
    int dim = 2;
    std::variant<Ball, AxisBox, Polygon2D, VoxelGrid, UnionShape> body;
};

/// Axis-aligned hyperplane {x_axis = offset}; axis is 0-based in code
/// (file formats and CLI flags use 1-based axes).
struct Hyperplane {
    int axis = 0;
    double offset = 0;
};

// Factories with invariant checks.
Shape make_ball(Vec center, double radius);
Shape make_box(Vec lo, Vec hi);
Shape make_polygon(Ring ring, bool check_simple = true);
Shape make_grid(VoxelGrid g, int dim);
Shape make_union(std::vector<Shape> parts, bool disjoint);
Shape make_empty(int dim);

bool is_empty_shape(const Shape& s);

/// Validates every structural invariant (dim consistency, ordering,
/// orientation, occupancy length); throws std::invalid_argument on failure.
void validate_shape(const Shape& s);

struct BBox {
    Vec lo, hi;
    double max_extent() const;
    double diagonal() const;
};
BBox shape_bbox(const Shape& s);

/// Pointwise membership (closed sets; boundaries are measure zero).
bool shape_contains(const Shape& s, const Vec& x);

// Structural transformations. All are exact on the representation except
// where noted.
Shape reflect(const Shape& s, const Hyperplane& p);

enum class ClipSign { positive, negative };

/// s intersected with {x_axis > offset} (positive) or {x_axis < offset}.
/// Exact for boxes, polygons, cell-aligned grids, and balls not cut by the
/// plane; a ball that is actually cut is polygonized (2D) or voxelized (3D+)
/// at a documented resolution.
Shape clip_halfspace(const Shape& s, const Hyperplane& p, ClipSign sign);

Shape translate(const Shape& s, const Vec& t);
Shape dilate(const Shape& s, double factor);  // scale about the origin

struct NormalizeResult {
    Shape shape;
    double scale = 1;  // applied as x -> scale * (x - shift)
    Vec shift;
};

/// Rescales to unit volume and moves the barycenter to the origin.
NormalizeResult normalize(const Shape& s);

/// Cell-center membership voxelization on the lattice h * Z^N (so that the
/// coordinate planes are cell boundaries). Throws on budget overflow.
VoxelGrid voxelize(const Shape& s, double h, size_t cell_budget = size_t(1) << 26);

}  // namespace isoq
