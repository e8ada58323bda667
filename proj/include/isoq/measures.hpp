#pragma once

#include <optional>
#include <vector>

#include "isoq/shape.hpp"

namespace isoq {

enum class Method { exact, grid };

struct ErrorBounds {
    double volume = 0;
    double perimeter = 0;
    double barycenter = 0;
    double diameter = 0;
};

struct GeometricSummary {
    double volume = 0;
    double perimeter = 0;
    Vec barycenter;
    double diameter = 0;
    Method method = Method::exact;
    ErrorBounds error_bound;
    /// Set when a union with touching components (disjoint flag unset) had
    /// to be routed through the grid perimeter estimator.
    bool touching_warning = false;
};

struct MeasureOptions {
    /// Cells across the largest bounding-box extent for grid quadrature.
    int quadrature_resolution_2d = 1024;
    int quadrature_resolution_3d = 160;
    /// Overrides the resolutions above with an absolute spacing when set.
    std::optional<double> quadrature_spacing;

    int resolution(int dim, double extent) const;
    double spacing(int dim, double extent) const;
};

double volume(const Shape& s);
double perimeter(const Shape& s);
Vec barycenter(const Shape& s);
double diameter(const Shape& s);

GeometricSummary measure(const Shape& s, const MeasureOptions& opts = {});

struct SymdiffResult {
    double value = 0;
    double error_bound = 0;  // 0 on the exact paths
};

/// Volume of a triangle-inequality-respecting symmetric difference. Exact
/// for ball pairs and for shapes sharing a lattice (an analytic shape is
/// rasterized onto a grid partner's own lattice); common-grid quadrature
/// otherwise, with error bound <= sqrt(N) h (P(a) + P(b)).
SymdiffResult symdiff_volume(const Shape& a, const Shape& b,
                             const MeasureOptions& opts = {});

/// Component analysis: cell face-adjacency for grids, pairwise-overlap graph
/// for unions, true for single primitives. A topological proxy for the
/// perimeter-splitting definition, exact on this representation class.
bool is_connected(const Shape& s);

/// max over the given axes of |s delta reflect(s, plane)| / 2, for the
/// coordinate planes through the origin. Intended for volume-1 shapes.
double symmetry_defect(const Shape& s, const std::vector<int>& axes,
                       const MeasureOptions& opts = {});

/// Volume of s intersected with the ball B(c, r) whose volume ball_vol is
/// already known to the caller. Exact for analytic primitives (closed forms
/// and polygon-disk areas), lattice-exact for grids.
double intersect_ball_volume(const Shape& s, const Vec& c, double r, double ball_vol,
                             const MeasureOptions& opts = {});

/// Cauchy-Crofton perimeter estimate for an occupancy grid: sampled
/// crossing counts over 32 fixed directions (2D) or 98 (3D). First-order
/// convergent in the spacing on shapes with smooth boundary.
double crofton_perimeter(const VoxelGrid& g, int dim);

/// Positive lower bound for the gap between two shapes when one can be
/// certified, used to decide whether disjoint-union perimeters may be
/// summed exactly.
std::optional<double> separation_lower_bound(const Shape& a, const Shape& b);

}  // namespace isoq
