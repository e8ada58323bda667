#include "isoq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "isoq/balls.hpp"

namespace isoq {

namespace {

// splitmix64: tiny, portable, and identical on every platform, which the
// byte-determinism contract needs (the standard library distributions are
// implementation-defined).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
};

constexpr double kPi = std::numbers::pi;

double sqrt_clamped(double x) { return std::sqrt(std::max(x, 0.0)); }

double finest_spacing(const Shape& s) {
    if (const auto* g = std::get_if<VoxelGrid>(&s.body)) return g->spacing;
    if (const auto* u = std::get_if<UnionShape>(&s.body)) {
        double h = 0;
        for (const Shape& p : u->parts) {
            double ph = finest_spacing(p);
            if (ph > 0) h = h > 0 ? std::min(h, ph) : ph;
        }
        return h;
    }
    return 0;
}

void add_check(VerificationReport& rep, const std::string& name, double lhs, double rhs,
               double tolerance, bool advisory = false) {
    // Convention: checks assert lhs <= rhs; slack = rhs - lhs.
    Check c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.pass = c.slack >= -tolerance;
    c.advisory = advisory;
    rep.checks.push_back(std::move(c));
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::perturbed_ball: return "perturbed_ball";
        case Family::two_ball: return "two_ball";
        case Family::dumbbell: return "dumbbell";
        case Family::random_polygon: return "random_polygon";
        case Family::k_symmetric_random: return "k_symmetric_random";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::perturbed_ball, Family::two_ball, Family::dumbbell,
                     Family::random_polygon, Family::k_symmetric_random})
        if (family_name(f) == name) return f;
    throw std::invalid_argument("unknown corpus family: " + name);
}

bool VerificationReport::passed() const {
    for (const Check& c : checks)
        if (!c.advisory && !c.pass) return false;
    return true;
}

uint64_t item_seed(uint64_t corpus_seed, uint64_t index) {
    Rng r(corpus_seed ^ (0x100000001b3ull * (index + 1)));
    return r.next();
}

Shape gen_two_ball(int n, double radius, double distance) {
    if (!(radius > 0 && radius < 1)) throw std::invalid_argument("two_ball: radius must be in (0,1)");
    if (!(distance > 2)) throw std::invalid_argument("two_ball: distance must exceed 2");
    if (!(distance > 1 + radius)) throw std::invalid_argument("two_ball: components overlap");
    Vec c2 = Vec::zero(n);
    c2[0] = distance;
    return make_union({make_ball(Vec::zero(n), 1.0), make_ball(c2, radius)}, true);
}

DependanceShape gen_dependance_family(int n, double eps) {
    if (!(eps > 0 && eps <= 0.1)) throw std::invalid_argument("dependance: eps must be in (0, 0.1]");
    DependanceShape out;
    double r_big = ball_radius_for_volume(n, 1.0 - eps);
    double r_small = ball_radius_for_volume(n, eps);
    Vec c2 = Vec::zero(n);
    c2[0] = 3.0 / eps;
    out.shape = make_union({make_ball(Vec::zero(n), r_big), make_ball(c2, r_small)}, true);
    double q = double(n - 1) / n;
    out.delta_closed = std::pow(1.0 - eps, q) + std::pow(eps, q) - 1.0;
    out.lambda0_closed = 2.0;
    out.diameter_closed = r_big + 3.0 / eps + r_small;
    return out;
}

namespace {

// Radial profile 1 + sum of low modes, with the coefficient mass capped so
// the total perturbation never exceeds the amplitude.
std::vector<double> mode_coefficients(Rng& rng, int count, double amplitude) {
    std::vector<double> raw(static_cast<size_t>(count));
    double total = 0;
    for (double& c : raw) {
        c = rng.uniform(-1.0, 1.0);
        total += std::abs(c);
    }
    if (total > 0)
        for (double& c : raw) c *= amplitude / total;
    return raw;
}

Shape star_polygon(int vertices, const std::function<double(double)>& radial) {
    Ring ring;
    ring.reserve(static_cast<size_t>(vertices));
    for (int j = 0; j < vertices; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / vertices;
        double r = radial(th);
        ring.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return make_polygon(std::move(ring), false);
}

}  // namespace

Shape gen_perturbed_ball(int n, double amplitude, int modes, uint64_t seed) {
    if (!(amplitude < 0.3)) throw std::invalid_argument("perturbed_ball: amplitude must be < 0.3");
    if (modes < 1) throw std::invalid_argument("perturbed_ball: need at least one mode");
    Rng rng(seed);
    if (n == 2) {
        std::vector<double> ac = mode_coefficients(rng, modes, amplitude * 0.5);
        std::vector<double> bc = mode_coefficients(rng, modes, amplitude * 0.5);
        return star_polygon(256, [&](double th) {
            double u = 0;
            for (int m = 1; m <= modes; ++m)
                u += ac[static_cast<size_t>(m - 1)] * std::cos(m * th) +
                     bc[static_cast<size_t>(m - 1)] * std::sin(m * th);
            return 1.0 + u;
        });
    }
    if (n == 3) {
        // Radial graph r(x^) = R (1 + sum c_j (x^ . v_j)^{p_j}); smooth and
        // low frequency on the sphere.
        std::vector<double> cs = mode_coefficients(rng, modes, amplitude);
        std::vector<Vec> vs;
        std::vector<int> ps;
        for (int j = 0; j < modes; ++j) {
            Vec v(3);
            double norm = 0;
            while (norm < 1e-3) {
                for (int i = 0; i < 3; ++i) v[i] = rng.uniform(-1.0, 1.0);
                norm = v.norm();
            }
            v *= 1.0 / norm;
            vs.push_back(v);
            ps.push_back(rng.uniform_int(1, 3));
        }
        double base_r = ball_radius_for_volume(3, 1.0);
        auto radial = [&](const Vec& dir) {
            double u = 0;
            for (int j = 0; j < modes; ++j)
                u += cs[static_cast<size_t>(j)] * std::pow(dir.dot(vs[static_cast<size_t>(j)]), ps[static_cast<size_t>(j)]);
            return base_r * (1.0 + u);
        };
        double h = 0.02;
        double reach = base_r * (1.0 + amplitude) + 2 * h;
        VoxelGrid g;
        g.spacing = h;
        g.origin = Vec{-reach, -reach, -reach};
        for (int i = 0; i < 3; ++i) {
            g.origin[i] = std::floor(g.origin[i] / h) * h;
            g.dims[static_cast<size_t>(i)] = static_cast<int>(std::ceil(2 * reach / h)) + 2;
        }
        g.occupancy.assign(g.cell_count(), 0);
        size_t cells = g.cell_count();
        for (size_t f = 0; f < cells; ++f) {
            Vec c = g.cell_center(f, 3);
            double rr = c.norm();
            if (rr < 1e-12) {
                g.occupancy[f] = 1;
                continue;
            }
            g.occupancy[f] = rr <= radial(c * (1.0 / rr)) ? 1 : 0;
        }
        return make_grid(std::move(g), 3);
    }
    throw std::invalid_argument("perturbed_ball: supported dimensions are 2 and 3");
}

Shape gen_random_polygon(uint64_t seed) {
    Rng rng(seed);
    double amplitude = rng.uniform(0.08, 0.28);
    int modes = rng.uniform_int(2, 8);
    std::vector<double> ac = mode_coefficients(rng, modes, amplitude * 0.5);
    std::vector<double> bc = mode_coefficients(rng, modes, amplitude * 0.5);
    // stretches up to ~e^3 push a fair fraction of items past the planar
    // case-split threshold 2 sqrt(pi) in normalized diameter
    double stretch = std::exp(rng.uniform(0.0, 3.0));
    Shape star = star_polygon(192, [&](double th) {
        double u = 0;
        for (int m = 1; m <= modes; ++m)
            u += ac[static_cast<size_t>(m - 1)] * std::cos(m * th) +
                 bc[static_cast<size_t>(m - 1)] * std::sin(m * th);
        return 1.0 + u;
    });
    // Anisotropic stretch keeps the polygon simple and star shaped.
    const auto& ring = std::get<Polygon2D>(star.body).ring;
    Ring stretched;
    stretched.reserve(ring.size());
    for (const P2& p : ring) stretched.push_back({p.x * stretch, p.y});
    return make_polygon(std::move(stretched), false);
}

Shape gen_k_symmetric_random(uint64_t seed) {
    Rng rng(seed);
    int modes = rng.uniform_int(1, 5);
    std::vector<double> ac = mode_coefficients(rng, modes, 0.25);
    int q = 64;  // vertices per quadrant
    Ring quadrant;
    quadrant.reserve(static_cast<size_t>(q));
    for (int j = 0; j < q; ++j) {
        double th = 0.5 * kPi * (j + 0.5) / q;
        double r = 1.0;
        for (int m = 1; m <= modes; ++m) r += ac[static_cast<size_t>(m - 1)] * std::cos(2.0 * m * th);
        quadrant.push_back({r * std::cos(th), r * std::sin(th)});
    }
    // Mirror explicitly so the two-axis symmetry is exact in floating point.
    Ring ring;
    ring.reserve(static_cast<size_t>(4 * q));
    for (const P2& p : quadrant) ring.push_back(p);
    for (auto it = quadrant.rbegin(); it != quadrant.rend(); ++it) ring.push_back({-it->x, it->y});
    for (const P2& p : quadrant) ring.push_back({-p.x, -p.y});
    for (auto it = quadrant.rbegin(); it != quadrant.rend(); ++it) ring.push_back({it->x, -it->y});
    return make_polygon(std::move(ring), false);
}

Shape gen_dumbbell(int n, double separation, double connector_halfwidth, uint64_t seed) {
    if (n < 3) throw std::invalid_argument("dumbbell: needs dimension >= 3");
    Rng rng(seed);
    double r = ball_radius_for_volume(n, 0.5);
    double half = 0.5 * separation;
    Vec left = Vec::zero(n), right = Vec::zero(n);
    left[0] = -half;
    right[0] = half;
    Vec lo = Vec::zero(n), hi = Vec::zero(n);
    lo[0] = -half;
    hi[0] = half;
    for (int i = 1; i < n; ++i) {
        double w = connector_halfwidth * rng.uniform(0.8, 1.2);
        lo[i] = -w;
        hi[i] = w;
    }
    return make_union({make_ball(left, r), make_ball(right, r), make_box(lo, hi)}, false);
}

std::vector<CorpusItem> generate_corpus(Family family, int n, int count, uint64_t corpus_seed) {
    std::vector<CorpusItem> items;
    items.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        uint64_t seed = item_seed(corpus_seed, static_cast<uint64_t>(i));
        Rng rng(seed);
        CorpusItem item;
        std::ostringstream id;
        id << family_name(family) << "_" << n << "d_" << i;
        item.id = id.str();
        item.family = family;
        item.seed = seed;
        switch (family) {
            case Family::perturbed_ball: {
                double amplitude = rng.uniform(0.02, 0.2);
                int modes = rng.uniform_int(2, 6);
                item.params = {{"amplitude", amplitude}, {"modes", double(modes)}};
                item.shape = gen_perturbed_ball(n, amplitude, modes, rng.next());
                break;
            }
            case Family::two_ball: {
                double radius = rng.uniform(0.05, 0.3);
                double distance = std::exp(rng.uniform(std::log(3.0), std::log(300.0)));
                item.params = {{"radius", radius}, {"distance", distance}};
                item.shape = gen_two_ball(n, radius, distance);
                break;
            }
            case Family::dumbbell: {
                double separation = rng.uniform(3.0, 12.0);
                double w = rng.uniform(0.01, 0.04);
                item.params = {{"separation", separation}, {"halfwidth", w}};
                item.shape = gen_dumbbell(n, separation, w, rng.next());
                break;
            }
            case Family::random_polygon: {
                item.shape = gen_random_polygon(seed);
                break;
            }
            case Family::k_symmetric_random: {
                item.shape = gen_k_symmetric_random(seed);
                break;
            }
        }
        items.push_back(std::move(item));
    }
    return items;
}

VerificationReport verify_summary_invariants(const CorpusItem& item, const MeasureOptions& opts) {
    VerificationReport rep;
    rep.item_id = item.id;
    GeometricSummary sum = measure(item.shape, opts);
    int n = item.shape.dim;
    double tol_p = std::max(1e-9, 3 * sum.error_bound.perimeter);
    double tol_v = std::max(1e-9, 3 * sum.error_bound.volume);
    add_check(rep, "isoperimetric_lower_bound", isoperimetric_perimeter(n, sum.volume),
              sum.perimeter, tol_p + tol_v);
    add_check(rep, "isodiametric_lower_bound",
              2.0 * std::pow(sum.volume / omega(n), 1.0 / n), sum.diameter,
              std::max(1e-9, 3 * sum.error_bound.diameter) + tol_v);
    BBox box = shape_bbox(item.shape);
    double inside = 0;
    for (int i = 0; i < n; ++i)
        inside = std::max({inside, box.lo[i] - sum.barycenter[i], sum.barycenter[i] - box.hi[i]});
    add_check(rep, "barycenter_in_bbox", inside, 0.0,
              std::max(1e-9, sum.error_bound.barycenter));
    return rep;
}

VerificationReport verify_main_theorem(const CorpusItem& item, const ConstantsTable& constants,
                                       const MeasureOptions& opts) {
    VerificationReport rep;
    rep.item_id = item.id;
    int n = item.shape.dim;
    GeometricSummary sum = measure(item.shape, opts);
    double d_item = std::max(sum.diameter / std::pow(sum.volume, 1.0 / n),
                             diameter_floor(n, constants.floor_mode));
    double lam0 = barycentric_asymmetry(item.shape, opts);
    double delta = deficit(item.shape, opts);
    double c0 = c0_closed_form(n, d_item, constants.c_f);
    // Grid-backed measurements get their error bounds propagated: the
    // deficit is raised by three times its uncertainty, the asymmetry
    // lowered, so discretization cannot produce false failures.
    double iso = isoperimetric_perimeter(n, sum.volume);
    double delta_err = 3.0 * sum.error_bound.perimeter / iso;
    double lam0_err =
        3.0 * std::sqrt(double(n)) * finest_spacing(item.shape) * (sum.perimeter + iso) /
        sum.volume;
    double lhs = std::max(lam0 - lam0_err, 0.0);
    double rhs = c0 * sqrt_clamped(delta + delta_err);
    add_check(rep, "main_bound", lhs, rhs, 1e-9);
    // Empirical ratio, logged for the growth plots; never gates.
    double ratio = delta > 1e-15 ? lam0 / std::sqrt(delta) : 0.0;
    add_check(rep, "lambda0_over_sqrt_deficit", ratio, c0, 0.0, true);
    return rep;
}

VerificationReport verify_section2_suite(const CorpusItem& item, const ConstantsTable& constants,
                                         const OptimizerSettings& settings,
                                         const MeasureOptions& opts) {
    VerificationReport rep;
    rep.item_id = item.id;
    SymmetrizationTrace trace = symmetrize_full(item.shape, constants, settings, opts);
    // Analytic representations go through exact paths, so their slack
    // tolerance stays at rounding scale; grid-backed shapes get three times
    // their cell-size error bound.
    double h = finest_spacing(item.shape);
    double grid_tol = h > 0 ? std::max(1e-6, 3 * h) : 1e-9;
    for (const SymmetrizationStep& step : trace.steps) {
        std::string prefix = "axis" + std::to_string(step.axis + 1) + "_";
        add_check(rep, prefix + "eps_vs_sqrt_deficit", step.split.epsilon,
                  step.split.epsilon + step.slacks.eps_vs_sqrt_deficit, grid_tol);
        if (step.slacks.eta_sum_bound)
            add_check(rep, prefix + "eta_sum_bound", step.lambda0,
                      step.lambda0 + *step.slacks.eta_sum_bound, grid_tol);
        if (step.slacks.eta_sandwich_low)
            add_check(rep, prefix + "eta_sandwich_low", 4.0 / 3.0 * step.split.eta,
                      step.eta_prime, grid_tol);
        if (step.slacks.eta_sandwich_high)
            add_check(rep, prefix + "eta_sandwich_high", step.eta_prime,
                      4.0 * step.split.eta, grid_tol);
        add_check(rep, prefix + "perimeter_pair_bound", 0.0, step.slacks.perimeter_pair_bound,
                  1e-9);
        add_check(rep, prefix + "deficit_split_bound", step.deficit_prime + step.deficit_dprime,
                  step.deficit_prime + step.deficit_dprime + step.slacks.deficit_split, grid_tol);
        if (step.slacks.epsilon_large_bound)
            add_check(rep, prefix + "epsilon_large_bound", step.lambda0,
                      step.lambda0 + *step.slacks.epsilon_large_bound, grid_tol);
        if (step.trilem.applicable) {
            add_check(rep, prefix + "nested_triple_upper", step.trilem.sym_diff_matched,
                      2.0 * step.trilem.sym_diff_fraenkel, grid_tol);
            add_check(rep, prefix + "nested_triple_lower",
                      step.trilem.sym_diff_matched - step.trilem.rhs_slack,
                      step.trilem.sym_diff_matched, grid_tol);
        }
        if (step.moment_bound.applicable) {
            add_check(rep, prefix + "moment_bound_reciprocal", step.moment_bound.q / 7.0,
                      step.moment_bound.lhs, grid_tol);
            add_check(rep, prefix + "moment_bound_factor7", 7.0 * step.moment_bound.q,
                      step.moment_bound.lhs, grid_tol, true);
            add_check(rep, prefix + "moment_bound_eta_reciprocal",
                      step.moment_bound.eta_over_d / 7.0, step.moment_bound.lhs, grid_tol);
            add_check(rep, prefix + "moment_bound_eta_factor7",
                      7.0 * step.moment_bound.eta_over_d, step.moment_bound.lhs, grid_tol, true);
        }
        add_check(rep, prefix + "branch_epsilon_large",
                  step.branch == StepBranch::epsilon_large ? 1.0 : 0.0, 1.0, 0.0, true);
    }
    add_check(rep, "final_symmetry_defect", trace.final_symmetry_defect, grid_tol, grid_tol);
    return rep;
}

VerificationReport verify_convex_section_bound(const Shape& s, const std::string& item_id,
                                               const MeasureOptions& opts) {
    (void)opts;
    VerificationReport rep;
    rep.item_id = item_id;
    int n = s.dim;
    bool convex = false;
    if (std::holds_alternative<Ball>(s.body) || std::holds_alternative<AxisBox>(s.body)) {
        convex = true;
    } else if (const auto* poly = std::get_if<Polygon2D>(&s.body)) {
        convex = true;
        const Ring& r = poly->ring;
        size_t m = r.size();
        for (size_t i = 0; i < m && convex; ++i) {
            P2 a = r[i], b = r[(i + 1) % m], c = r[(i + 2) % m];
            convex = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) >= -1e-12;
        }
    }
    if (!convex) throw std::invalid_argument("convex section bound requires a convex shape");

    // Integral over slices orthogonal to the first axis of
    // (n-1) omega_{n-1}^{1/(n-1)} section^{(n-2)/(n-1)}.
    BBox box = shape_bbox(s);
    double lo = box.lo[0], hi = box.hi[0];
    const int kSlices = 4096;
    double dt = (hi - lo) / kSlices;
    double coeff = (n - 1) * std::pow(omega(n - 1), 1.0 / (n - 1));
    double expo = double(n - 2) / (n - 1);
    double integral = 0;
    for (int k = 0; k < kSlices; ++k) {
        double t = lo + (k + 0.5) * dt;
        double section = 0;
        if (const auto* ball = std::get_if<Ball>(&s.body)) {
            double u = ball->radius * ball->radius - (t - ball->center[0]) * (t - ball->center[0]);
            if (u > 0) section = omega(n - 1) * std::pow(std::sqrt(u), n - 1);
        } else if (const auto* bx = std::get_if<AxisBox>(&s.body)) {
            section = 1;
            for (int i = 1; i < n; ++i) section *= bx->hi[i] - bx->lo[i];
            if (t < bx->lo[0] || t > bx->hi[0]) section = 0;
        } else if (const auto* poly = std::get_if<Polygon2D>(&s.body)) {
            const Ring& r = poly->ring;
            size_t m = r.size();
            double ymin = 0, ymax = 0;
            bool any = false;
            for (size_t i = 0; i < m; ++i) {
                P2 a = r[i], b = r[(i + 1) % m];
                if ((a.x <= t && b.x >= t) || (b.x <= t && a.x >= t)) {
                    if (a.x == b.x) continue;
                    double y = a.y + (t - a.x) / (b.x - a.x) * (b.y - a.y);
                    ymin = any ? std::min(ymin, y) : y;
                    ymax = any ? std::max(ymax, y) : y;
                    any = true;
                }
            }
            section = any ? ymax - ymin : 0.0;
        }
        if (section > 0) integral += coeff * std::pow(section, expo) * dt;
    }
    double perim = perimeter(s);
    double tol = std::max(1e-6 * perim, 4.0 * coeff * (hi - lo) / kSlices);
    add_check(rep, "convex_section_bound", integral, perim, tol);
    return rep;
}

VerificationReport verify_bch(const CorpusItem& item, double c_f, const MeasureOptions& opts) {
    if (item.shape.dim != 2)
        throw std::invalid_argument("planar connected-set check requires dimension 2");
    if (!is_connected(item.shape))
        throw std::invalid_argument("planar connected-set check requires a connected shape");
    VerificationReport rep;
    rep.item_id = item.id;
    Shape unit = normalize(item.shape).shape;
    double diam = diameter(unit);
    double perim = perimeter(unit);
    double delta = deficit(unit, opts);
    double lam0 = barycentric_asymmetry(unit, opts);
    double threshold = 2.0 * std::sqrt(kPi);
    add_check(rep, "connected_perimeter_vs_diameter", 2.0 * diam, perim, 1e-9);
    if (diam > threshold) {
        add_check(rep, "large_diameter_deficit", 1.0, delta, 1e-9);
        add_check(rep, "large_diameter_bound", lam0, 2.0 * sqrt_clamped(delta), 1e-9);
    } else {
        double c0 = c0_closed_form(2, threshold, c_f);
        add_check(rep, "small_diameter_bound", lam0, c0 * sqrt_clamped(delta),
                  std::max(1e-9, 1e-6 * c0));
    }
    return rep;
}

SweepResult d_sweep(int n, const std::vector<double>& eps_grid) {
    if (eps_grid.size() < 3)
        throw std::invalid_argument("d_sweep needs at least 3 grid points for the fit");
    SweepResult out;
    out.expected_slope = double(n - 1) / (2.0 * n);
    for (double eps : eps_grid) {
        DependanceShape dep = gen_dependance_family(n, eps);
        SweepRow row;
        row.eps = eps;
        row.lambda0 = barycentric_asymmetry(dep.shape);
        row.delta = deficit(dep.shape);
        row.d = diameter(dep.shape) / std::pow(volume(dep.shape), 1.0 / n);
        row.ratio = row.lambda0 / sqrt_clamped(row.delta);
        out.rows.push_back(row);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = static_cast<double>(out.rows.size());
    for (const SweepRow& r : out.rows) {
        double x = std::log(r.d), y = std::log(r.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

VerifyRunResult run_verification(const VerifyRunConfig& config) {
    VerifyRunResult result;
    ConstantsTable constants = make_constants(config.n, diameter_floor(config.n), config.c_f);
    for (Family family : config.families) {
        std::vector<CorpusItem> items =
            generate_corpus(family, config.n, config.count, config.seed);
        for (CorpusItem& item : items) result.items.push_back(std::move(item));
    }

    size_t count = result.items.size();
    std::vector<std::vector<VerificationReport>> slots(count);
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= count) break;
            const CorpusItem& item = result.items[i];
            std::vector<VerificationReport> reps;
            reps.push_back(verify_summary_invariants(item, config.measure));
            reps.push_back(verify_main_theorem(item, constants, config.measure));
            bool planar = item.shape.dim == 2;
            if (config.with_section2 && planar && item.family != Family::dumbbell)
                reps.push_back(
                    verify_section2_suite(item, constants, config.optimizer, config.measure));
            if (config.with_bch && planar &&
                (item.family == Family::perturbed_ball ||
                 item.family == Family::random_polygon ||
                 item.family == Family::k_symmetric_random))
                reps.push_back(verify_bch(item, config.c_f, config.measure));
            slots[i] = std::move(reps);
        }
    };
    int workers = std::max(1, config.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (std::vector<VerificationReport>& reps : slots)
        for (VerificationReport& rep : reps) {
            result.all_passed = result.all_passed && rep.passed();
            result.reports.push_back(std::move(rep));
        }
    return result;
}

namespace {

using ordered = nlohmann::ordered_json;

ordered check_to_json(const Check& c) {
    ordered j;
    j["name"] = c.name;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["slack"] = c.slack;
    j["pass"] = c.pass;
    j["advisory"] = c.advisory;
    return j;
}

}  // namespace

std::string constants_to_json(const ConstantsTable& t) {
    ordered j;
    j["n"] = t.n;
    j["d"] = t.d;
    j["c_f"] = t.c_f;
    j["floor_mode"] = t.floor_mode == DiameterFloor::isodiametric ? "isodiametric" : "alternate";
    j["omega"] = t.omegas;
    j["c1"] = t.c1;
    j["c2"] = t.c2;
    j["c3"] = t.c3;
    j["chain"] = t.chain;
    j["c0"] = t.c0;
    j["fuglede_d"] = t.fuglede_d;
    j["bch"] = t.bch;
    return j.dump(2);
}

std::string reports_to_json(const VerifyRunResult& result, const ConstantsTable& constants,
                            bool include_timing) {
    ordered j;
    j["config"] = ordered::parse(constants_to_json(constants));
    ordered items = ordered::array();
    for (const VerificationReport& rep : result.reports) {
        ordered r;
        r["item"] = rep.item_id;
        if (include_timing) r["timing_ms"] = rep.timing_ms;
        ordered checks = ordered::array();
        for (const Check& c : rep.checks) checks.push_back(check_to_json(c));
        r["checks"] = checks;
        r["pass"] = rep.passed();
        items.push_back(r);
    }
    j["reports"] = items;
    j["all_passed"] = result.all_passed;
    return j.dump(2);
}

std::string reports_to_csv(const VerifyRunResult& result) {
    std::ostringstream out;
    out << "item_id,check,lhs,rhs,slack,pass\n";
    out.precision(17);
    for (const VerificationReport& rep : result.reports)
        for (const Check& c : rep.checks)
            out << rep.item_id << "," << c.name << "," << c.lhs << "," << c.rhs << ","
                << c.slack << "," << (c.pass ? 1 : 0) << "\n";
    return out.str();
}

std::string sweep_to_json(const SweepResult& r) {
    ordered j;
    ordered rows = ordered::array();
    for (const SweepRow& row : r.rows) {
        ordered jr;
        jr["eps"] = row.eps;
        jr["d"] = row.d;
        jr["lambda0"] = row.lambda0;
        jr["delta"] = row.delta;
        jr["ratio"] = row.ratio;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    j["fitted_slope"] = r.fitted_slope;
    j["expected_slope"] = r.expected_slope;
    return j.dump(2);
}

std::string sweep_to_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "eps,d,lambda0,delta,ratio\n";
    out.precision(17);
    for (const SweepRow& row : r.rows)
        out << row.eps << "," << row.d << "," << row.lambda0 << "," << row.delta << ","
            << row.ratio << "\n";
    out << "# fitted_slope," << r.fitted_slope << ",expected," << r.expected_slope << "\n";
    return out.str();
}

}  // namespace isoq
