#include "isoq/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isoq/measures.hpp"

namespace isoq {

namespace {

constexpr int kBallPolygonSides = 4096;

double floor_to_lattice(double x, double h) { return std::floor(x / h) * h; }

// Sampled intersection volume of two shapes over the overlap of their
// bounding boxes. Zero for gapped or merely touching pairs; used to vet the
// disjoint flag on unions.
double sampled_overlap(const Shape& a, const Shape& b) {
    BBox ba = shape_bbox(a), bb = shape_bbox(b);
    int dim = a.dim;
    Vec lo(dim), hi(dim);
    double vol = 1;
    for (int i = 0; i < dim; ++i) {
        lo[i] = std::max(ba.lo[i], bb.lo[i]);
        hi[i] = std::min(ba.hi[i], bb.hi[i]);
        if (lo[i] >= hi[i]) return 0.0;
        vol *= hi[i] - lo[i];
    }
    const int kSamples = dim == 2 ? 48 : 16;
    size_t hits = 0, total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<size_t>(kSamples);
    for (size_t f = 0; f < total; ++f) {
        size_t rest = f;
        Vec p(dim);
        for (int i = dim - 1; i >= 0; --i) {
            int k = static_cast<int>(rest % static_cast<size_t>(kSamples));
            rest /= static_cast<size_t>(kSamples);
            p[i] = lo[i] + (hi[i] - lo[i]) * (k + 0.5) / kSamples;
        }
        if (shape_contains(a, p) && shape_contains(b, p)) ++hits;
    }
    return vol * static_cast<double>(hits) / static_cast<double>(total);
}

Ring ball_to_ring(const Ball& b) {
    Ring r;
    r.reserve(kBallPolygonSides);
    for (int i = 0; i < kBallPolygonSides; ++i) {
        double a = 2.0 * std::numbers::pi * (i + 0.5) / kBallPolygonSides;
        r.push_back({b.center[0] + b.radius * std::cos(a),
                     b.center[1] + b.radius * std::sin(a)});
    }
    return r;
}

}  // namespace

size_t VoxelGrid::cell_count() const {
    size_t n = 1;
    for (int d : dims)
        if (d > 0) n *= static_cast<size_t>(d);
    return n;
}

size_t VoxelGrid::index(const std::array<int, kMaxDim>& idx, int dim) const {
    size_t flat = 0;
    for (int d = 0; d < dim; ++d) flat = flat * static_cast<size_t>(dims[d]) + static_cast<size_t>(idx[d]);
    return flat;
}

Vec VoxelGrid::cell_center(size_t flat, int dim) const {
    Vec c(dim);
    for (int d = dim - 1; d >= 0; --d) {
        size_t w = static_cast<size_t>(dims[d]);
        c[d] = origin[d] + spacing * (static_cast<double>(flat % w) + 0.5);
        flat /= w;
    }
    return c;
}

size_t VoxelGrid::occupied_count() const {
    size_t n = 0;
    for (uint8_t v : occupancy) n += v != 0;
    return n;
}

Shape make_ball(Vec center, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
    return Shape{center.dim(), Ball{center, radius}};
}

Shape make_box(Vec lo, Vec hi) {
    if (lo.dim() != hi.dim()) throw std::invalid_argument("box corner dimensions differ");
    for (int i = 0; i < lo.dim(); ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("box corners must be strictly ordered");
    return Shape{lo.dim(), AxisBox{lo, hi}};
}

Shape make_polygon(Ring ring, bool check_simple) {
    if (ring.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    ring_make_ccw(ring);
    if (check_simple && !ring_is_simple(ring))
        throw std::invalid_argument("polygon must be simple");
    return Shape{2, Polygon2D{std::move(ring)}};
}

Shape make_grid(VoxelGrid g, int dim) {
    if (!(g.spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
    if (g.occupancy.size() != g.cell_count())
        throw std::invalid_argument("occupancy length must equal the product of dims");
    return Shape{dim, std::move(g)};
}

Shape make_union(std::vector<Shape> parts, bool disjoint) {
    int dim = parts.empty() ? 2 : parts.front().dim;
    for (const Shape& p : parts)
        if (p.dim != dim) throw std::invalid_argument("union parts must share a dimension");
    return Shape{dim, UnionShape{std::move(parts), disjoint}};
}

Shape make_empty(int dim) { return Shape{dim, UnionShape{{}, true}}; }

bool is_empty_shape(const Shape& s) {
    if (const auto* u = std::get_if<UnionShape>(&s.body)) {
        for (const Shape& p : u->parts)
            if (!is_empty_shape(p)) return false;
        return true;
    }
    if (const auto* g = std::get_if<VoxelGrid>(&s.body)) return g->occupied_count() == 0;
    return false;
}

void validate_shape(const Shape& s) {
    if (s.dim < 2 || s.dim > kMaxDim) throw std::invalid_argument("shape dimension out of range");
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                if (b.center.dim() != s.dim) throw std::invalid_argument("ball center dimension");
                if (!(b.radius > 0)) throw std::invalid_argument("ball radius must be positive");
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                if (b.lo.dim() != s.dim || b.hi.dim() != s.dim)
                    throw std::invalid_argument("box corner dimension");
                for (int i = 0; i < s.dim; ++i)
                    if (!(b.lo[i] < b.hi[i]))
                        throw std::invalid_argument("box corners must be strictly ordered");
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                if (s.dim != 2) throw std::invalid_argument("polygon requires dimension 2");
                if (b.ring.size() < 3 || !ring_is_ccw(b.ring) || !ring_is_simple(b.ring))
                    throw std::invalid_argument("polygon must be simple and counterclockwise");
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                if (!(b.spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
                if (b.occupancy.size() != b.cell_count())
                    throw std::invalid_argument("occupancy length must equal the product of dims");
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                for (const Shape& p : b.parts) {
                    if (p.dim != s.dim) throw std::invalid_argument("union part dimension");
                    validate_shape(p);
                }
                if (b.disjoint) {
                    // sampled pairwise overlap must be negligible
                    for (size_t i = 0; i < b.parts.size(); ++i)
                        for (size_t j = i + 1; j < b.parts.size(); ++j) {
                            double ov = sampled_overlap(b.parts[i], b.parts[j]);
                            double scale = std::max(volume(b.parts[i]), volume(b.parts[j]));
                            if (ov > 1e-6 * std::max(scale, 1e-12))
                                throw std::invalid_argument(
                                    "union marked disjoint has overlapping parts");
                        }
                }
            }
        },
        s.body);
}

double BBox::max_extent() const {
    double m = 0;
    for (int i = 0; i < lo.dim(); ++i) m = std::max(m, hi[i] - lo[i]);
    return m;
}

double BBox::diagonal() const { return (hi - lo).norm(); }

BBox shape_bbox(const Shape& s) {
    return std::visit(
        [&](const auto& b) -> BBox {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                Vec lo = b.center, hi = b.center;
                for (int i = 0; i < s.dim; ++i) {
                    lo[i] -= b.radius;
                    hi[i] += b.radius;
                }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                return {b.lo, b.hi};
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                auto [lo, hi] = ring_bbox(b.ring);
                return {Vec{lo.x, lo.y}, Vec{hi.x, hi.y}};
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                Vec lo = b.origin, hi = b.origin;
                for (int i = 0; i < s.dim; ++i) hi[i] += b.spacing * b.dims[static_cast<size_t>(i)];
                return {lo, hi};
            } else {
                if (b.parts.empty()) return {Vec::zero(s.dim), Vec::zero(s.dim)};
                BBox box = shape_bbox(b.parts.front());
                for (size_t i = 1; i < b.parts.size(); ++i) {
                    BBox o = shape_bbox(b.parts[i]);
                    for (int d = 0; d < s.dim; ++d) {
                        box.lo[d] = std::min(box.lo[d], o.lo[d]);
                        box.hi[d] = std::max(box.hi[d], o.hi[d]);
                    }
                }
                return box;
            }
        },
        s.body);
}

bool shape_contains(const Shape& s, const Vec& x) {
    return std::visit(
        [&](const auto& b) -> bool {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return x.dist(b.center) <= b.radius;
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                for (int i = 0; i < s.dim; ++i)
                    if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
                return true;
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                return ring_contains(b.ring, {x[0], x[1]});
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                std::array<int, kMaxDim> idx{};
                for (int i = 0; i < s.dim; ++i) {
                    double t = (x[i] - b.origin[i]) / b.spacing;
                    int k = static_cast<int>(std::floor(t));
                    if (k < 0 || k >= b.dims[static_cast<size_t>(i)]) return false;
                    idx[static_cast<size_t>(i)] = k;
                }
                return b.occupancy[b.index(idx, s.dim)] != 0;
            } else {
                for (const Shape& p : b.parts)
                    if (shape_contains(p, x)) return true;
                return false;
            }
        },
        s.body);
}

Shape reflect(const Shape& s, const Hyperplane& p) {
    if (p.axis < 0 || p.axis >= s.dim) throw std::invalid_argument("reflection axis out of range");
    return std::visit(
        [&](const auto& b) -> Shape {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                Vec c = b.center.with_coord(p.axis, 2 * p.offset - b.center[p.axis]);
                return Shape{s.dim, Ball{c, b.radius}};
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                Vec lo = b.lo, hi = b.hi;
                lo[p.axis] = 2 * p.offset - b.hi[p.axis];
                hi[p.axis] = 2 * p.offset - b.lo[p.axis];
                return Shape{s.dim, AxisBox{lo, hi}};
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                return Shape{2, Polygon2D{ring_reflect(b.ring, p.axis, p.offset)}};
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                // Offset must sit on a cell boundary for the mirrored cells
                // to land back on the lattice.
                double t = (p.offset - b.origin[p.axis]) / b.spacing;
                if (std::abs(t - std::round(t)) > 1e-9)
                    throw std::invalid_argument(
                        "voxel reflection requires a cell-aligned plane offset");
                VoxelGrid g = b;
                g.origin[p.axis] =
                    2 * p.offset - (b.origin[p.axis] + b.spacing * b.dims[static_cast<size_t>(p.axis)]);
                size_t n = b.cell_count();
                int w = b.dims[static_cast<size_t>(p.axis)];
                for (size_t f = 0; f < n; ++f) {
                    // mirror the axis index
                    std::array<int, kMaxDim> idx{};
                    size_t rest = f;
                    for (int d = s.dim - 1; d >= 0; --d) {
                        idx[static_cast<size_t>(d)] = static_cast<int>(rest % static_cast<size_t>(b.dims[static_cast<size_t>(d)]));
                        rest /= static_cast<size_t>(b.dims[static_cast<size_t>(d)]);
                    }
                    idx[static_cast<size_t>(p.axis)] = w - 1 - idx[static_cast<size_t>(p.axis)];
                    g.occupancy[g.index(idx, s.dim)] = b.occupancy[f];
                }
                return Shape{s.dim, std::move(g)};
            } else {
                std::vector<Shape> parts;
                parts.reserve(b.parts.size());
                for (const Shape& q : b.parts) parts.push_back(reflect(q, p));
                return Shape{s.dim, UnionShape{std::move(parts), b.disjoint}};
            }
        },
        s.body);
}

Shape clip_halfspace(const Shape& s, const Hyperplane& p, ClipSign sign) {
    if (p.axis < 0 || p.axis >= s.dim) throw std::invalid_argument("clip axis out of range");
    bool pos = sign == ClipSign::positive;
    return std::visit(
        [&](const auto& b) -> Shape {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                double delta = b.center[p.axis] - p.offset;
                if (pos ? (delta - b.radius >= 0) : (delta + b.radius <= 0))
                    return s;  // entirely on the kept side
                if (pos ? (delta + b.radius <= 0) : (delta - b.radius >= 0))
                    return make_empty(s.dim);
                if (s.dim == 2) {
                    Shape poly = Shape{2, Polygon2D{ball_to_ring(b)}};
                    return clip_halfspace(poly, p, sign);
                }
                VoxelGrid g = voxelize(s, b.radius / 128.0);
                return clip_halfspace(Shape{s.dim, std::move(g)}, p, sign);
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                Vec lo = b.lo, hi = b.hi;
                if (pos)
                    lo[p.axis] = std::max(lo[p.axis], p.offset);
                else
                    hi[p.axis] = std::min(hi[p.axis], p.offset);
                if (!(lo[p.axis] < hi[p.axis])) return make_empty(s.dim);
                return Shape{s.dim, AxisBox{lo, hi}};
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                std::vector<Ring> pieces = ring_clip_halfplane(b.ring, p.axis, p.offset, pos);
                if (pieces.empty()) return make_empty(2);
                if (pieces.size() == 1) return Shape{2, Polygon2D{std::move(pieces[0])}};
                std::vector<Shape> parts;
                parts.reserve(pieces.size());
                for (Ring& r : pieces) parts.push_back(Shape{2, Polygon2D{std::move(r)}});
                return Shape{2, UnionShape{std::move(parts), true}};
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                // keep cells by center; exact when the plane is cell-aligned
                VoxelGrid g = b;
                size_t n = b.cell_count();
                for (size_t f = 0; f < n; ++f) {
                    if (!b.occupancy[f]) continue;
                    double c = b.cell_center(f, s.dim)[p.axis];
                    bool keep = pos ? c > p.offset : c < p.offset;
                    if (!keep) g.occupancy[f] = 0;
                }
                return Shape{s.dim, std::move(g)};
            } else {
                std::vector<Shape> parts;
                for (const Shape& q : b.parts) {
                    Shape c = clip_halfspace(q, p, sign);
                    if (!is_empty_shape(c)) parts.push_back(std::move(c));
                }
                if (parts.empty()) return make_empty(s.dim);
                if (parts.size() == 1) return parts[0];
                return Shape{s.dim, UnionShape{std::move(parts), b.disjoint}};
            }
        },
        s.body);
}

Shape translate(const Shape& s, const Vec& t) {
    return std::visit(
        [&](const auto& b) -> Shape {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return Shape{s.dim, Ball{b.center + t, b.radius}};
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                return Shape{s.dim, AxisBox{b.lo + t, b.hi + t}};
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                return Shape{2, Polygon2D{ring_translate(b.ring, {t[0], t[1]})}};
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                VoxelGrid g = b;
                g.origin += t;
                return Shape{s.dim, std::move(g)};
            } else {
                std::vector<Shape> parts;
                parts.reserve(b.parts.size());
                for (const Shape& q : b.parts) parts.push_back(translate(q, t));
                return Shape{s.dim, UnionShape{std::move(parts), b.disjoint}};
            }
        },
        s.body);
}

Shape dilate(const Shape& s, double factor) {
    if (!(factor > 0)) throw std::invalid_argument("dilation factor must be positive");
    return std::visit(
        [&](const auto& b) -> Shape {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return Shape{s.dim, Ball{b.center * factor, b.radius * factor}};
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                return Shape{s.dim, AxisBox{b.lo * factor, b.hi * factor}};
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                return Shape{2, Polygon2D{ring_scale(b.ring, factor)}};
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                VoxelGrid g = b;
                g.origin *= factor;
                g.spacing *= factor;
                return Shape{s.dim, std::move(g)};
            } else {
                std::vector<Shape> parts;
                parts.reserve(b.parts.size());
                for (const Shape& q : b.parts) parts.push_back(dilate(q, factor));
                return Shape{s.dim, UnionShape{std::move(parts), b.disjoint}};
            }
        },
        s.body);
}

NormalizeResult normalize(const Shape& s) {
    double v = volume(s);
    if (!(v > 0)) throw std::domain_error("cannot normalize a zero-volume shape");
    Vec b = barycenter(s);
    double scale = std::pow(v, -1.0 / s.dim);
    NormalizeResult r;
    r.scale = scale;
    r.shift = b;
    r.shape = dilate(translate(s, -b), scale);
    return r;
}

VoxelGrid voxelize(const Shape& s, double h, size_t cell_budget) {
    if (!(h > 0)) throw std::invalid_argument("voxel spacing must be positive");
    BBox box = shape_bbox(s);
    VoxelGrid g;
    g.spacing = h;
    g.origin = Vec(s.dim);
    size_t cells = 1;
    for (int i = 0; i < s.dim; ++i) {
        g.origin[i] = floor_to_lattice(box.lo[i], h) - h;
        double top = std::ceil(box.hi[i] / h) * h + h;
        g.dims[static_cast<size_t>(i)] = std::max(1, static_cast<int>(std::round((top - g.origin[i]) / h)));
        cells *= static_cast<size_t>(g.dims[static_cast<size_t>(i)]);
        if (cells > cell_budget) throw std::runtime_error("voxelize: cell budget exceeded");
    }
    g.occupancy.assign(cells, 0);
    for (size_t f = 0; f < cells; ++f)
        g.occupancy[f] = shape_contains(s, g.cell_center(f, s.dim)) ? 1 : 0;
    return g;
}

}  // namespace isoq
