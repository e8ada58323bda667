#pragma once

#include <utility>
#include <vector>

namespace isoq {

struct P2 {
    double x = 0, y = 0;
};

/// Vertex ring of a simple polygon, counterclockwise, no repeated closing
/// vertex.
using Ring = std::vector<P2>;

double ring_signed_area(const Ring& r);
double ring_perimeter(const Ring& r);

/// Integrals of x and of y over the polygon interior (Green's theorem).
P2 ring_first_moment(const Ring& r);
P2 ring_centroid(const Ring& r);

bool ring_is_ccw(const Ring& r);
void ring_make_ccw(Ring& r);

/// O(n^2) segment-crossing test; adjacent edges may share endpoints only.
bool ring_is_simple(const Ring& r);

/// Crossing-number membership test; boundary points land on either side.
bool ring_contains(const Ring& r, P2 p);

std::pair<P2, P2> ring_bbox(const Ring& r);

Ring ring_translate(const Ring& r, P2 t);
Ring ring_scale(const Ring& r, double t);

/// Mirror across the line {coord(axis) = offset}; the result is re-oriented
/// counterclockwise. axis 0 mirrors x, axis 1 mirrors y.
Ring ring_reflect(const Ring& r, int axis, double offset);

/// Intersection of the polygon with the halfplane {coord(axis) > offset}
/// (keep_positive) or {< offset}. May return zero, one, or several disjoint
/// pieces; crossing points get their clipped coordinate set to the offset
/// exactly.
std::vector<Ring> ring_clip_halfplane(const Ring& r, int axis, double offset,
                                      bool keep_positive);

/// Total length of boundary edges lying on the line {coord(axis) = offset}.
double ring_length_on_line(const Ring& r, int axis, double offset);

/// Exact area of the intersection with the disk of center c and radius rad.
double ring_disk_intersection_area(const Ring& r, P2 c, double rad);

std::vector<P2> convex_hull(std::vector<P2> pts);

/// Largest pairwise distance, computed brute force over hull vertices.
double point_set_diameter(const std::vector<P2>& pts);

}  // namespace isoq
