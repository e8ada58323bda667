#include "isoq/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "isoq/balls.hpp"

namespace isoq {

namespace {

void flatten_pieces(const Shape& s, std::vector<Shape>& out) {
    if (const auto* u = std::get_if<UnionShape>(&s.body)) {
        for (const Shape& p : u->parts) flatten_pieces(p, out);
    } else {
        out.push_back(s);
    }
}

double finest_grid_spacing(const Shape& s) {
    if (const auto* g = std::get_if<VoxelGrid>(&s.body)) return g->spacing;
    if (const auto* u = std::get_if<UnionShape>(&s.body)) {
        double h = 0;
        for (const Shape& p : u->parts) {
            double ph = finest_grid_spacing(p);
            if (ph > 0) h = h > 0 ? std::min(h, ph) : ph;
        }
        return h;
    }
    return 0;
}

double piece_length_on_plane(const Shape& piece, int axis) {
    if (const auto* poly = std::get_if<Polygon2D>(&piece.body))
        return ring_length_on_line(poly->ring, axis, 0.0);
    if (const auto* box = std::get_if<AxisBox>(&piece.body)) {
        if (box->lo[axis] != 0.0 && box->hi[axis] != 0.0) return 0.0;
        double face = 1;
        for (int i = 0; i < piece.dim; ++i)
            if (i != axis) face *= box->hi[i] - box->lo[i];
        return face;
    }
    return 0.0;  // balls and grids meet the plane in measure zero after a clean clip
}

// Merge a polygon that meets the plane {coord(axis) = 0} in one contiguous
// boundary run with its own mirror image: walk the off-plane chain, then
// walk its reflection backwards. Multi-run pieces (which would need holes)
// are rejected.
std::optional<Ring> stitch_doubled_ring(const Ring& r, int axis) {
    size_t m = r.size();
    auto on_plane = [&](const P2& p) { return (axis == 0 ? p.x : p.y) == 0.0; };
    std::vector<char> on(m);
    size_t on_count = 0;
    for (size_t i = 0; i < m; ++i) {
        on[i] = on_plane(r[i]);
        on_count += static_cast<size_t>(on[i]);
    }
    if (on_count < 2 || on_count >= m) return std::nullopt;
    int transitions = 0;
    for (size_t i = 0; i < m; ++i) transitions += on[i] != on[(i + 1) % m];
    if (transitions != 2) return std::nullopt;

    // w0 = last on-plane vertex before the off-plane chain; wk = first
    // on-plane vertex after it.
    size_t w0 = m;
    for (size_t i = 0; i < m; ++i)
        if (on[i] && !on[(i + 1) % m]) {
            w0 = i;
            break;
        }
    if (w0 == m) return std::nullopt;
    Ring out;
    size_t idx = w0;
    out.push_back(r[idx]);
    while (true) {
        idx = (idx + 1) % m;
        out.push_back(r[idx]);
        if (on[idx]) break;  // reached wk
    }
    size_t chain = out.size();  // w0 .. wk inclusive
    for (size_t k = chain - 1; k-- > 1;) {
        P2 p = out[k];
        if (axis == 0)
            p.x = -p.x;
        else
            p.y = -p.y;
        out.push_back(p);
    }
    if (out.size() < 3) return std::nullopt;
    return out;
}

// E+ (as clip pieces) doubled across the plane {x_axis = 0}: the shape, its
// exact volume, and its exact perimeter (interface edges become interior
// and cancel). Polygon pieces are stitched into single rings where possible
// so that later pipeline stages see ordinary polygons.
struct Doubled {
    Shape shape;
    double vol = 0;
    double perim = 0;
};

Doubled reflection_double(const Shape& half, int axis) {
    std::vector<Shape> pieces;
    flatten_pieces(half, pieces);
    Doubled out;
    std::vector<Shape> parts;
    for (const Shape& p : pieces) {
        double vol_p = volume(p);
        if (!(vol_p > 0)) continue;
        out.vol += 2.0 * vol_p;
        if (const auto* poly = std::get_if<Polygon2D>(&p.body)) {
            if (auto stitched = stitch_doubled_ring(poly->ring, axis)) {
                out.perim += ring_perimeter(*stitched);
                parts.push_back(make_polygon(std::move(*stitched), false));
                continue;
            }
        }
        if (const auto* box = std::get_if<AxisBox>(&p.body)) {
            if (box->lo[axis] == 0.0 || box->hi[axis] == 0.0) {
                Vec lo = box->lo, hi = box->hi;
                double reach = std::max(std::abs(lo[axis]), std::abs(hi[axis]));
                lo[axis] = -reach;
                hi[axis] = reach;
                Shape doubled = make_box(lo, hi);
                out.perim += perimeter(doubled);
                parts.push_back(std::move(doubled));
                continue;
            }
        }
        out.perim += 2.0 * (perimeter(p) - piece_length_on_plane(p, axis));
        parts.push_back(p);
        parts.push_back(reflect(p, Hyperplane{axis, 0.0}));
    }
    int dim = half.dim;
    if (parts.empty())
        out.shape = make_empty(dim);
    else if (parts.size() == 1)
        out.shape = std::move(parts[0]);
    else
        out.shape = make_union(std::move(parts), true);
    return out;
}

double shape_deficit_from(double perim, double vol, int dim) {
    double pb = isoperimetric_perimeter(dim, vol);
    return (perim - pb) / pb;
}

// Farthest point of the cap {x in B(center, rho): side * x_axis > 0} from
// the query point: either the sphere antipode, when it lies on the kept
// side, or a point on the rim of the flat face.
double farthest_in_cap_distance(const Vec& q, const Vec& center, double rho, int axis,
                                double side) {
    int n = q.dim();
    double best = 0;
    Vec d = center - q;
    double dn = d.norm();
    Vec antipode = dn > 0 ? center + d * (rho / dn) : center + Vec::unit(n, axis) * rho;
    if (side * antipode[axis] >= 0) best = std::max(best, q.dist(antipode));
    double rf2 = rho * rho - center[axis] * center[axis];
    if (rf2 > 0) {
        double rf = std::sqrt(rf2);
        Vec c0 = center.with_coord(axis, 0.0);
        Vec w = (c0 - q).with_coord(axis, 0.0);
        double wn = w.norm();
        Vec rim = wn > 1e-300 ? c0 + w * (rf / wn)
                              : c0 + Vec::unit(n, axis == 0 ? 1 : 0) * rf;
        best = std::max(best, q.dist(rim));
    } else if (side * center[axis] > 0) {
        best = std::max(best, dn + rho);  // plane misses the ball entirely
    }
    return best;
}

double cap_diameter(const Vec& center, double rho, int axis, double side) {
    if (side * center[axis] > 0) return 2.0 * rho;  // cap contains an equator
    double rf2 = rho * rho - center[axis] * center[axis];
    return rf2 > 0 ? 2.0 * std::sqrt(rf2) : 0.0;
}

struct Cloud {
    std::vector<Vec> pts;
    double radius = 0;
};

void collect_clouds(const Shape& s, std::vector<Cloud>& out) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                out.push_back({{b.center}, b.radius});
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                Cloud c;
                for (int mask = 0; mask < (1 << s.dim); ++mask) {
                    Vec v(s.dim);
                    for (int d = 0; d < s.dim; ++d)
                        v[d] = (mask & (1 << d)) ? b.hi[d] : b.lo[d];
                    c.pts.push_back(v);
                }
                out.push_back(std::move(c));
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                Cloud c;
                for (const P2& p : b.ring) c.pts.push_back(Vec{p.x, p.y});
                out.push_back(std::move(c));
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                Cloud c;
                size_t n = b.cell_count();
                for (size_t f = 0; f < n; ++f)
                    if (b.occupancy[f]) c.pts.push_back(b.cell_center(f, s.dim));
                c.radius = 0.5 * b.spacing * std::sqrt(double(s.dim));
                if (!c.pts.empty()) out.push_back(std::move(c));
            } else {
                for (const Shape& p : b.parts) collect_clouds(p, out);
            }
        },
        s.body);
}

double diameter_with_cap(const Shape& g, const Vec& center, double rho, int axis, double side) {
    double best = std::max(diameter(g), cap_diameter(center, rho, axis, side));
    std::vector<Cloud> clouds;
    collect_clouds(g, clouds);
    for (const Cloud& c : clouds)
        for (const Vec& p : c.pts)
            best = std::max(best, farthest_in_cap_distance(p, center, rho, axis, side) + c.radius);
    return best;
}

}  // namespace

SplitState split(const Shape& s, int axis, const MeasureOptions& opts) {
    (void)opts;
    double vol = volume(s);
    if (std::abs(vol - 1.0) > 1e-6)
        throw std::invalid_argument("split expects a unit-volume shape");
    Vec bar = barycenter(s);
    BBox box = shape_bbox(s);
    if (bar.norm() > 1e-6 * std::max(1.0, box.diagonal()))
        throw std::invalid_argument("split expects the barycenter at the origin");

    SplitState st;
    st.axis = axis;
    Hyperplane plane{axis, 0.0};
    st.e_plus = clip_halfspace(s, plane, ClipSign::positive);
    st.e_minus = clip_halfspace(s, plane, ClipSign::negative);
    st.vol_plus = volume(st.e_plus);
    st.vol_minus = volume(st.e_minus);
    st.epsilon = std::abs(0.5 - st.vol_plus / vol);
    if (st.vol_plus > 0)
        st.moment = barycenter(st.e_plus) * st.vol_plus;
    else
        st.moment = Vec::zero(s.dim);
    st.moment_projected = st.moment.with_coord(axis, 0.0);
    st.eta = st.moment_projected.norm();
    return st;
}

std::pair<Shape, Shape> build_reflections(const SplitState& st) {
    Doubled dp = reflection_double(st.e_plus, st.axis);
    Doubled dm = reflection_double(st.e_minus, st.axis);
    return {dp.shape, dm.shape};
}

TrilemReport trilem_check(const Shape& g, const Shape& h, const Shape& h_matched,
                          double tolerance, const MeasureOptions& opts) {
    double vg = volume(g), vh = volume(h), vht = volume(h_matched);
    if (std::abs(vht - vg) > tolerance * std::max(1.0, vg))
        throw std::invalid_argument("trilem_check: |H~| must equal |G|");
    double hht = symdiff_volume(h, h_matched, opts).value;
    if (std::abs(hht - std::abs(vh - vg)) > std::max(tolerance, 10 * opts.spacing(g.dim, 1.0)))
        throw std::invalid_argument("trilem_check: H and H~ must be nested");

    TrilemReport r;
    r.applicable = true;
    r.sym_diff_fraenkel = symdiff_volume(g, h, opts).value;
    r.sym_diff_matched = symdiff_volume(g, h_matched, opts).value;
    r.bar_distance = (barycenter(g) - barycenter(h_matched)).norm();
    r.d_prime = diameter(make_union({g, h_matched}, false));
    r.lhs_slack = 2.0 * r.sym_diff_fraenkel - r.sym_diff_matched;
    r.rhs_slack = r.sym_diff_matched - 2.0 * vg / r.d_prime * r.bar_distance;
    r.lhs_ok = r.lhs_slack >= -tolerance;
    r.rhs_ok = r.rhs_slack >= -tolerance;
    return r;
}

std::optional<double> eta_inequality_slack(const SymmetrizationStep& step) {
    return step.slacks.eta_sum_bound;
}

double deficit_split_slack(const SymmetrizationStep& step) { return step.slacks.deficit_split; }

SymmetrizationStep symmetrize_step(const Shape& s, int axis, const ConstantsTable& constants,
                                   const OptimizerSettings& settings,
                                   const MeasureOptions& opts) {
    int n = s.dim;
    if (axis < 0 || axis >= n) throw std::invalid_argument("symmetrize_step: axis out of range");
    if (constants.n != n)
        throw std::invalid_argument("symmetrize_step: constants dimension mismatch");

    SymmetrizationStep step;
    step.axis = axis;
    step.incoming_volume = volume(s);
    if (!(step.incoming_volume > 0)) throw std::domain_error("symmetrize_step: degenerate shape");

    // Work on the unit-volume centered copy; emit the chosen shape at the
    // incoming scale. Deficits and asymmetries are scale invariant; the
    // recorded moments live in the unit frame.
    Shape centered = translate(s, -barycenter(s));
    double scale = std::pow(step.incoming_volume, -1.0 / n);
    Shape unit = dilate(centered, scale);

    // Symmetry branching only needs to tell "exactly symmetric" from
    // "visibly asymmetric"; a coarse lattice does that at a fraction of the
    // cost (mirror-symmetric shapes cancel exactly at any resolution).
    MeasureOptions defect_opts = opts;
    defect_opts.quadrature_resolution_2d = std::min(opts.quadrature_resolution_2d, 256);
    defect_opts.quadrature_resolution_3d = std::min(opts.quadrature_resolution_3d, 96);

    std::vector<int> prior_axes;
    for (int a = 0; a < axis; ++a) prior_axes.push_back(a);
    if (!prior_axes.empty()) {
        step.prior_symmetry_defect = symmetry_defect(unit, prior_axes, defect_opts);
        double tol = std::max(1e-6, 10 * defect_opts.spacing(n, shape_bbox(unit).max_extent()));
        if (step.prior_symmetry_defect > tol)
            throw std::invalid_argument("symmetrize_step: earlier axes are not symmetric");
    }

    step.d_used = std::max(diameter(unit), diameter_floor(n, constants.floor_mode));
    step.lambda0 = barycentric_asymmetry(unit, opts);
    step.deficit_in = deficit(unit, opts);
    double sqrt_deficit = std::sqrt(std::max(step.deficit_in, 0.0));
    double C1 = constants.c1, C2 = constants.c2;

    // Exactly symmetric shapes rasterize to a defect of exactly zero, so
    // the branch threshold can stay tiny; grid-backed shapes get slack of
    // the order of their own cell size.
    double grid_h = finest_grid_spacing(unit);
    double sym_tol = grid_h > 0 ? 3.0 * grid_h : 1e-12;
    double axis_defect = symmetry_defect(unit, {axis}, defect_opts);

    step.split = split(unit, axis, opts);
    const SplitState& sp = step.split;
    step.slacks.eps_vs_sqrt_deficit = C1 * step.d_used * sqrt_deficit - sp.epsilon;

    if (axis_defect <= sym_tol) {
        step.branch = StepBranch::symmetric_fixed_point;
        step.e_prime = unit;
        step.e_dprime = unit;
        step.vol_prime = step.vol_dprime = 1.0;
        step.perimeter_prime = step.perimeter_dprime = perimeter(unit);
        step.lambda0_prime = step.lambda0_dprime = step.lambda0;
        step.deficit_prime = step.deficit_dprime = step.deficit_in;
        step.eta_prime = step.eta_dprime = sp.eta / std::max(sp.vol_plus, 1e-300);
        step.chose_prime = true;
        step.chosen = centered;
    } else if (!(sp.vol_plus > 0) || !(sp.vol_minus > 0)) {
        // A one-sided split cannot happen with the barycenter at the origin;
        // guarded rather than fatal.
        step.branch = StepBranch::degenerate;
        const Shape& half = sp.vol_plus > 0 ? sp.e_plus : sp.e_minus;
        Doubled d = reflection_double(half, axis);
        step.e_prime = d.shape;
        step.e_dprime = d.shape;
        step.vol_prime = step.vol_dprime = d.vol;
        step.perimeter_prime = step.perimeter_dprime = d.perim;
        step.lambda0_prime = step.lambda0_dprime = barycentric_asymmetry(d.shape, opts);
        step.deficit_prime = step.deficit_dprime = shape_deficit_from(d.perim, d.vol, n);
        step.chose_prime = true;
        step.chosen = dilate(d.shape, 1.0 / scale);
        step.slacks.epsilon_large_bound = 8.0 * C1 * step.d_used * sqrt_deficit - step.lambda0;
        return step;
    } else {
        Doubled dp = reflection_double(sp.e_plus, axis);
        Doubled dm = reflection_double(sp.e_minus, axis);
        step.e_prime = dp.shape;
        step.e_dprime = dm.shape;
        step.vol_prime = dp.vol;
        step.vol_dprime = dm.vol;
        step.perimeter_prime = dp.perim;
        step.perimeter_dprime = dm.perim;
        step.eta_prime = sp.eta / sp.vol_plus;
        step.eta_dprime = sp.eta / sp.vol_minus;
        step.lambda0_prime = barycentric_asymmetry(dp.shape, opts);
        step.lambda0_dprime = barycentric_asymmetry(dm.shape, opts);
        step.deficit_prime = shape_deficit_from(dp.perim, dp.vol, n);
        step.deficit_dprime = shape_deficit_from(dm.perim, dm.vol, n);
        step.branch =
            sp.epsilon > step.lambda0 / 8.0 ? StepBranch::epsilon_large : StepBranch::main;
        step.chose_prime = step.lambda0_prime >= step.lambda0_dprime;
        const Shape& chosen_unit = step.chose_prime ? step.e_prime : step.e_dprime;
        step.chosen = dilate(chosen_unit, 1.0 / scale);
    }

    double wn = omega(n), wm = omega(n - 1);
    double coeff = 8.0 * wm / std::pow(wn, double(n - 1) / n);
    if (step.branch == StepBranch::epsilon_large) {
        step.slacks.epsilon_large_bound = 8.0 * C1 * step.d_used * sqrt_deficit - step.lambda0;
    } else {
        step.slacks.eta_sum_bound =
            step.lambda0_prime + step.lambda0_dprime + coeff * sp.eta - step.lambda0;
    }
    if (sp.epsilon <= 0.25 && sp.eta > 1e-12 && step.branch != StepBranch::symmetric_fixed_point) {
        step.slacks.eta_sandwich_low = step.eta_prime - 4.0 / 3.0 * sp.eta;
        step.slacks.eta_sandwich_high = 4.0 * sp.eta - step.eta_prime;
    }
    {
        double lhs = isoperimetric_perimeter(n, 1.0 + 2.0 * sp.epsilon) +
                     isoperimetric_perimeter(n, std::max(1.0 - 2.0 * sp.epsilon, 0.0));
        double rhs = 2.0 * isoperimetric_perimeter(n, 1.0) -
                     std::pow(2.0, 3.0 + 1.0 / n) * n * std::pow(wn, 1.0 / n) *
                         (double(n - 1) / (double(n) * n)) * sp.epsilon * sp.epsilon;
        step.slacks.perimeter_pair_bound = lhs - rhs;
    }
    step.slacks.deficit_split = C2 * C2 * step.d_used * step.d_used * step.deficit_in -
                                (step.deficit_prime + step.deficit_dprime);

    // Nested-triple and moment-bound checks against a Fraenkel ball of the
    // unit copy, on the half-space singled out by the sign condition.
    FraenkelResult fr = fraenkel_asymmetry(unit, settings, opts);
    step.fraenkel_center = fr.center;
    step.fraenkel_lambda = fr.lambda;
    if (step.branch == StepBranch::main || step.branch == StepBranch::symmetric_fixed_point) {
        Vec p_hat = sp.moment_projected;
        Vec f_hat = fr.center.with_coord(axis, 0.0);
        bool positive_side = p_hat.dot(f_hat) <= 0.0;
        double side = positive_side ? 1.0 : -1.0;
        const Shape& g = positive_side ? sp.e_plus : sp.e_minus;
        double vol_g = positive_side ? sp.vol_plus : sp.vol_minus;
        Vec bar_g = barycenter(g);

        double r_f = ball_radius_for_volume(n, 1.0);
        double cap_f = cap_volume(n, r_f, -side * fr.center[axis]);
        double rho = cap_radius_for_volume(n, side * fr.center[axis], vol_g);
        double cap_t = -side * fr.center[axis];

        double inter_h = intersect_ball_volume(g, fr.center, r_f, ball_volume(n, r_f), opts);
        double inter_ht = intersect_ball_volume(g, fr.center, rho, ball_volume(n, rho), opts);
        double gdh = vol_g + cap_f - 2.0 * inter_h;
        double gdht = 2.0 * (vol_g - inter_ht);

        double cap_vol = cap_volume(n, rho, cap_t);
        Vec bar_ht = fr.center;
        bar_ht[axis] = (side * cap_moment(n, rho, cap_t) + fr.center[axis] * cap_vol) /
                       std::max(cap_vol, 1e-300);

        TrilemReport& tr = step.trilem;
        tr.applicable = true;
        tr.sym_diff_fraenkel = gdh;
        tr.sym_diff_matched = gdht;
        tr.bar_distance = (bar_g - bar_ht).norm();
        tr.d_prime = diameter_with_cap(g, fr.center, rho, axis, side);
        tr.lhs_slack = 2.0 * gdh - gdht;
        tr.rhs_slack = gdht - 2.0 * vol_g / tr.d_prime * tr.bar_distance;
        tr.lhs_ok = tr.lhs_slack >= -1e-9;
        tr.rhs_ok = tr.rhs_slack >= -1e-9;

        MomentBoundReport& mb = step.moment_bound;
        mb.applicable = true;
        mb.lhs = constants.c_f * sqrt_deficit;
        mb.q = vol_g / step.d_used * tr.bar_distance;
        mb.eta_over_d = sp.eta / step.d_used;
        mb.factor7_ok = mb.lhs >= 7.0 * mb.q - 1e-9;
        mb.reciprocal_ok = mb.lhs >= mb.q / 7.0 - 1e-9;
        mb.eta_factor7_ok = mb.lhs >= 7.0 * mb.eta_over_d - 1e-9;
        mb.eta_reciprocal_ok = mb.lhs >= mb.eta_over_d / 7.0 - 1e-9;
    }
    return step;
}

SymmetrizationTrace symmetrize_full(const Shape& s, const ConstantsTable& constants,
                                    const OptimizerSettings& settings,
                                    const MeasureOptions& opts) {
    SymmetrizationTrace trace;
    trace.config = constants;
    Shape current = normalize(s).shape;
    for (int axis = 0; axis < s.dim; ++axis) {
        SymmetrizationStep step = symmetrize_step(current, axis, constants, settings, opts);
        current = translate(step.chosen, -barycenter(step.chosen));
        trace.steps.push_back(std::move(step));
    }
    std::vector<int> all_axes;
    for (int a = 0; a < s.dim; ++a) all_axes.push_back(a);
    trace.final_shape = current;
    trace.final_symmetry_defect = symmetry_defect(normalize(current).shape, all_axes, opts);
    return trace;
}

}  // namespace isoq
