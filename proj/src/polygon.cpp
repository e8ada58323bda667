#include "isoq/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isoq {

namespace {

double cross(P2 a, P2 b) { return a.x * b.y - a.y * b.x; }

double coord(P2 p, int axis) { return axis == 0 ? p.x : p.y; }

P2 with_coord(P2 p, int axis, double v) {
    if (axis == 0)
        p.x = v;
    else
        p.y = v;
    return p;
}

// Proper or improper intersection of segments [a,b] and [c,d], excluding
// shared endpoints.
bool segments_cross(P2 a, P2 b, P2 c, P2 d) {
    auto orient = [](P2 p, P2 q, P2 r) {
        double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        return (v > 0) - (v < 0);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on = [](P2 p, P2 q, P2 r) {  // r collinear with pq and inside the box
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (o1 == 0 && on(a, b, c)) return true;
    if (o2 == 0 && on(a, b, d)) return true;
    if (o3 == 0 && on(c, d, a)) return true;
    if (o4 == 0 && on(c, d, b)) return true;
    return false;
}

}  // namespace

double ring_signed_area(const Ring& r) {
    double s = 0;
    size_t n = r.size();
    for (size_t i = 0; i < n; ++i) s += cross(r[i], r[(i + 1) % n]);
    return 0.5 * s;
}

double ring_perimeter(const Ring& r) {
    double s = 0;
    size_t n = r.size();
    for (size_t i = 0; i < n; ++i) {
        P2 a = r[i], b = r[(i + 1) % n];
        s += std::hypot(b.x - a.x, b.y - a.y);
    }
    return s;
}

P2 ring_first_moment(const Ring& r) {
    double mx = 0, my = 0;
    size_t n = r.size();
    for (size_t i = 0; i < n; ++i) {
        P2 a = r[i], b = r[(i + 1) % n];
        double c = cross(a, b);
        mx += (a.x + b.x) * c;
        my += (a.y + b.y) * c;
    }
    return {mx / 6.0, my / 6.0};
}

P2 ring_centroid(const Ring& r) {
    double a = ring_signed_area(r);
    if (a == 0) throw std::domain_error("centroid of a degenerate polygon");
    P2 m = ring_first_moment(r);
    return {m.x / a, m.y / a};
}

bool ring_is_ccw(const Ring& r) { return ring_signed_area(r) > 0; }

void ring_make_ccw(Ring& r) {
    if (!ring_is_ccw(r)) std::reverse(r.begin(), r.end());
}

bool ring_is_simple(const Ring& r) {
    size_t n = r.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        P2 a = r[i], b = r[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // adjacent
            if (segments_cross(a, b, r[j], r[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool ring_contains(const Ring& r, P2 p) {
    bool in = false;
    size_t n = r.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        P2 a = r[j], b = r[i];
        if ((b.y > p.y) != (a.y > p.y)) {
            double t = (p.y - b.y) / (a.y - b.y);
            if (p.x < b.x + t * (a.x - b.x)) in = !in;
        }
    }
    return in;
}

std::pair<P2, P2> ring_bbox(const Ring& r) {
    if (r.empty()) throw std::invalid_argument("bbox of empty ring");
    P2 lo = r[0], hi = r[0];
    for (const P2& p : r) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    return {lo, hi};
}

Ring ring_translate(const Ring& r, P2 t) {
    Ring out = r;
    for (P2& p : out) {
        p.x += t.x;
        p.y += t.y;
    }
    return out;
}

Ring ring_scale(const Ring& r, double t) {
    Ring out = r;
    for (P2& p : out) {
        p.x *= t;
        p.y *= t;
    }
    return out;
}

Ring ring_reflect(const Ring& r, int axis, double offset) {
    Ring out = r;
    for (P2& p : out) {
        double v = coord(p, axis);
        p = with_coord(p, axis, 2.0 * offset - v);
    }
    std::reverse(out.begin(), out.end());  // mirroring flips orientation
    return out;
}

double ring_length_on_line(const Ring& r, int axis, double offset) {
    double s = 0;
    size_t n = r.size();
    for (size_t i = 0; i < n; ++i) {
        P2 a = r[i], b = r[(i + 1) % n];
        if (coord(a, axis) == offset && coord(b, axis) == offset)
            s += std::abs(coord(b, 1 - axis) - coord(a, 1 - axis));
    }
    return s;
}

std::vector<Ring> ring_clip_halfplane(const Ring& r, int axis, double offset,
                                      bool keep_positive) {
    size_t n = r.size();
    double sgn = keep_positive ? 1.0 : -1.0;
    auto side = [&](P2 p) { return sgn * (coord(p, axis) - offset); };

    bool any_in = false, any_out = false;
    for (const P2& p : r) {
        double f = side(p);
        if (f > 0) any_in = true;
        if (f < 0) any_out = true;
    }
    if (!any_out) return {r};
    if (!any_in) return {};

    // Maximal boundary runs inside the (closed) halfplane. Each run starts
    // and ends with a point on the clip line: either an interpolated edge
    // crossing or an original on-line vertex.
    struct Arc {
        Ring pts;
        size_t next = SIZE_MAX;  // arc glued after this one along the line
    };
    std::vector<Arc> arcs;
    Ring cur;
    auto flush = [&]() {
        if (cur.size() >= 2) arcs.push_back({std::move(cur), SIZE_MAX});
        cur.clear();
    };
    // Start the walk at a strictly-outside vertex so no run wraps around.
    size_t start = 0;
    while (side(r[start]) >= 0) ++start;
    for (size_t k = 0; k < n; ++k) {
        P2 a = r[(start + k) % n];
        P2 b = r[(start + k + 1) % n];
        double fa = side(a), fb = side(b);
        if (fa >= 0) cur.push_back(a);
        if ((fa > 0 && fb < 0) || (fa < 0 && fb > 0)) {
            double t = fa / (fa - fb);
            P2 q = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            q = with_coord(q, axis, offset);  // land exactly on the line
            cur.push_back(q);
            if (fb < 0) flush();
        } else if (fa >= 0 && fb < 0) {
            flush();  // run ended on an on-line vertex
        }
    }
    flush();
    if (arcs.empty()) return {};

    // Close the pieces along the clip line. Walking the line in the
    // direction that keeps the clipped region on the left (downward for the
    // positive side of axis 0, CCW input), run endpoints alternate
    // exit, entry, exit, entry: consecutive sorted pairs are joined.
    struct Node {
        double u;
        size_t arc;
        bool is_end;
    };
    std::vector<Node> nodes;
    nodes.reserve(arcs.size() * 2);
    for (size_t i = 0; i < arcs.size(); ++i) {
        nodes.push_back({coord(arcs[i].pts.front(), 1 - axis), i, false});
        nodes.push_back({coord(arcs[i].pts.back(), 1 - axis), i, true});
    }
    bool descending = keep_positive ^ (axis == 1);
    std::stable_sort(nodes.begin(), nodes.end(), [&](const Node& a, const Node& b) {
        if (a.u != b.u) return descending ? a.u > b.u : a.u < b.u;
        return a.is_end > b.is_end;  // exits first on ties
    });
    for (size_t i = 0; i + 1 < nodes.size(); i += 2) {
        // nodes[i] should be an arc end (exit), nodes[i+1] an arc start.
        const Node* e = &nodes[i];
        const Node* s = &nodes[i + 1];
        if (!e->is_end) std::swap(e, s);
        arcs[e->arc].next = s->arc;
    }

    std::vector<Ring> out;
    std::vector<bool> used(arcs.size(), false);
    for (size_t i = 0; i < arcs.size(); ++i) {
        if (used[i]) continue;
        Ring piece;
        size_t j = i;
        while (!used[j]) {
            used[j] = true;
            piece.insert(piece.end(), arcs[j].pts.begin(), arcs[j].pts.end());
            j = arcs[j].next;
            if (j == SIZE_MAX) break;  // degenerate pairing; keep what we have
        }
        // Drop duplicate junction points.
        Ring clean;
        for (const P2& p : piece) {
            if (clean.empty() || clean.back().x != p.x || clean.back().y != p.y)
                clean.push_back(p);
        }
        while (clean.size() >= 2 && clean.front().x == clean.back().x &&
               clean.front().y == clean.back().y)
            clean.pop_back();
        if (clean.size() >= 3 && std::abs(ring_signed_area(clean)) > 0) out.push_back(clean);
    }
    return out;
}

double ring_disk_intersection_area(const Ring& r, P2 c, double rad) {
    double total = 0;
    size_t n = r.size();
    double r2 = rad * rad;
    auto sector = [&](double ux, double uy, double vx, double vy) {
        return 0.5 * r2 * std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
    };
    for (size_t i = 0; i < n; ++i) {
        double ax = r[i].x - c.x, ay = r[i].y - c.y;
        double bx = r[(i + 1) % n].x - c.x, by = r[(i + 1) % n].y - c.y;
        double dx = bx - ax, dy = by - ay;
        double dd = dx * dx + dy * dy;
        if (dd == 0) continue;
        double ad = ax * dx + ay * dy;
        double aa = ax * ax + ay * ay;
        double disc = ad * ad - dd * (aa - r2);
        if (disc <= 0) {  // chord line misses the disk: arc contribution only
            total += sector(ax, ay, bx, by);
            continue;
        }
        double sq = std::sqrt(disc);
        double t0 = (-ad - sq) / dd, t1 = (-ad + sq) / dd;
        if (t1 <= 0 || t0 >= 1) {
            total += sector(ax, ay, bx, by);
            continue;
        }
        double u0 = std::max(t0, 0.0), u1 = std::min(t1, 1.0);
        double px0 = ax + u0 * dx, py0 = ay + u0 * dy;
        double px1 = ax + u1 * dx, py1 = ay + u1 * dy;
        total += sector(ax, ay, px0, py0) + 0.5 * (px0 * py1 - py0 * px1) +
                 sector(px1, py1, bx, by);
    }
    return total;
}

std::vector<P2> convex_hull(std::vector<P2> pts) {
    std::sort(pts.begin(), pts.end(), [](P2 a, P2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](P2 a, P2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<P2> h(2 * n);
    size_t k = 0;
    auto turn = [](P2 o, P2 a, P2 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && turn(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && turn(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double point_set_diameter(const std::vector<P2>& pts) {
    std::vector<P2> h = convex_hull(pts);
    double best = 0;
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = i + 1; j < h.size(); ++j)
            best = std::max(best, std::hypot(h[i].x - h[j].x, h[i].y - h[j].y));
    return best;
}

}  // namespace isoq
