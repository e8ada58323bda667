#include "isoq/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "isoq/balls.hpp"
#include "isoq/constants.hpp"

namespace isoq {

namespace {

void collect_ball_components(const Shape& s, std::vector<const Ball*>& out, bool& all_balls) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                out.push_back(&b);
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                for (const Shape& p : b.parts) collect_ball_components(p, out, all_balls);
            } else {
                (void)b;
                all_balls = false;
            }
        },
        s.body);
}

void collect_component_barycenters(const Shape& s, std::vector<Vec>& out) {
    if (const auto* u = std::get_if<UnionShape>(&s.body)) {
        for (const Shape& p : u->parts) collect_component_barycenters(p, out);
    } else if (volume(s) > 0) {
        out.push_back(barycenter(s));
    }
}

struct Objective {
    const Shape* shape;
    double mass;
    double radius;
    const MeasureOptions* opts;
    mutable long evals = 0;

    double operator()(const Vec& x) const {
        ++evals;
        double inter = intersect_ball_volume(*shape, x, radius, mass, *opts);
        return 2.0 * (mass - inter) / mass;
    }
};

// Deterministic Nelder-Mead with an axis-aligned start simplex. Stops on
// simplex collapse or when the shared budget runs dry.
struct SimplexResult {
    Vec best;
    double value;
    bool exhausted;
};

SimplexResult nelder_mead(const Objective& f, Vec x0, double step, double tol, long budget) {
    int n = x0.dim();
    std::vector<Vec> xs;
    std::vector<double> fs;
    xs.push_back(x0);
    for (int i = 0; i < n; ++i) xs.push_back(x0 + Vec::unit(n, i) * step);
    for (const Vec& x : xs) fs.push_back(f(x));
    long used = static_cast<long>(xs.size());
    auto order = [&]() {
        std::vector<size_t> idx(xs.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
        std::vector<Vec> x2;
        std::vector<double> f2;
        for (size_t i : idx) {
            x2.push_back(xs[i]);
            f2.push_back(fs[i]);
        }
        xs = std::move(x2);
        fs = std::move(f2);
    };
    order();
    bool exhausted = false;
    while (true) {
        if (used >= budget) {
            exhausted = true;
            break;
        }
        double spread = 0;
        for (size_t i = 1; i < xs.size(); ++i) spread = std::max(spread, xs[i].dist(xs[0]));
        if (spread <= tol * (1.0 + xs[0].norm()) && fs.back() - fs.front() <= 1e-13) break;

        Vec centroid(n);
        for (size_t i = 0; i + 1 < xs.size(); ++i) centroid += xs[i];
        centroid *= 1.0 / n;
        Vec xr = centroid + (centroid - xs.back());
        double fr = f(xr);
        ++used;
        if (fr < fs.front()) {
            Vec xe = centroid + (xr - centroid) * 2.0;
            double fe = f(xe);
            ++used;
            if (fe < fr) {
                xs.back() = xe;
                fs.back() = fe;
            } else {
                xs.back() = xr;
                fs.back() = fr;
            }
        } else if (fr < fs[fs.size() - 2]) {
            xs.back() = xr;
            fs.back() = fr;
        } else {
            Vec xc = centroid + (xs.back() - centroid) * 0.5;
            double fc = f(xc);
            ++used;
            if (fc < fs.back()) {
                xs.back() = xc;
                fs.back() = fc;
            } else {
                for (size_t i = 1; i < xs.size(); ++i) {
                    xs[i] = xs[0] + (xs[i] - xs[0]) * 0.5;
                    fs[i] = f(xs[i]);
                }
                used += n;
            }
        }
        order();
    }
    return {xs[0], fs[0], exhausted};
}

}  // namespace

double deficit(const Shape& s, const MeasureOptions& opts) {
    (void)opts;
    double m = volume(s);
    if (!(m > 0)) throw std::domain_error("deficit of a degenerate shape");
    double pb = isoperimetric_perimeter(s.dim, m);
    return (perimeter(s) - pb) / pb;
}

double barycentric_asymmetry(const Shape& s, const MeasureOptions& opts) {
    double m = volume(s);
    if (!(m > 0)) throw std::domain_error("asymmetry of a degenerate shape");
    Vec b = barycenter(s);
    double r = ball_radius_for_volume(s.dim, m);

    // Disjointness is decidable exactly for analytic ball unions; this keeps
    // the flagship counterexamples free of quadrature noise.
    std::vector<const Ball*> balls;
    bool all_balls = true;
    collect_ball_components(s, balls, all_balls);
    if (all_balls && !balls.empty()) {
        bool separated = true;
        for (const Ball* comp : balls)
            separated = separated && comp->center.dist(b) >= comp->radius + r;
        if (separated) return 2.0;
    }

    double inter = intersect_ball_volume(s, b, r, m, opts);
    return 2.0 * (m - inter) / m;
}

FraenkelResult fraenkel_asymmetry(const Shape& s, const OptimizerSettings& settings,
                                  const MeasureOptions& opts) {
    double m = volume(s);
    if (!(m > 0)) throw std::domain_error("asymmetry of a degenerate shape");
    int n = s.dim;
    Vec bary = barycenter(s);
    double r = ball_radius_for_volume(n, m);
    Objective f{&s, m, r, &opts, 0};

    long budget = std::max<long>(settings.budget, 16);

    // Stage 1: coarse scan over the bounding box, shrunk so it never eats
    // more than half the budget.
    int k = settings.coarse_resolution;
    while (k > 2 && std::pow(double(k), n) > 0.5 * double(budget)) --k;
    BBox box = shape_bbox(s);
    std::vector<std::pair<double, Vec>> scored;
    std::array<int, kMaxDim> idx{};
    while (true) {
        Vec c(n);
        for (int i = 0; i < n; ++i)
            c[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * (idx[static_cast<size_t>(i)] + 0.5) / k;
        scored.emplace_back(f(c), c);
        int d = n - 1;
        while (d >= 0 && ++idx[static_cast<size_t>(d)] == k) {
            idx[static_cast<size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    // Stage 2: simplex refinement from the best scan cells, the barycenter
    // and each component barycenter.
    std::vector<Vec> starts;
    starts.push_back(bary);
    collect_component_barycenters(s, starts);
    for (size_t i = 0; i < scored.size() && i < 3; ++i) starts.push_back(scored[i].second);

    double step = std::max(box.max_extent() / (2.0 * k), 1e-6);
    double best_val = f(bary);
    Vec best_center = bary;
    bool exhausted = false;
    for (const Vec& x0 : starts) {
        long remaining = budget - f.evals;
        if (remaining <= long(2 * n + 2)) {
            exhausted = true;
            break;
        }
        long slice = std::max<long>(remaining / static_cast<long>(starts.size()), 2 * n + 2);
        SimplexResult r0 = nelder_mead(f, x0, step, settings.tolerance, slice);
        exhausted |= r0.exhausted;
        if (r0.value < best_val) {
            best_val = r0.value;
            best_center = r0.best;
        }
    }

    FraenkelResult out;
    out.lambda = best_val;
    out.center = best_center;
    out.evaluations = f.evals;
    out.budget_exhausted = exhausted;
    // epsilon_F lives on the unit-volume normalization.
    double scale = std::pow(m, -1.0 / n);
    double f1 = (best_center[0] - bary[0]) * scale;
    double cap = cap_volume(n, ball_radius_for_volume(n, 1.0), -f1);
    out.epsilon_f = std::abs(cap - 0.5);
    return out;
}

SandwichResult sandwich_check(const Shape& s, double symmetry_tolerance,
                              const OptimizerSettings& settings, const MeasureOptions& opts) {
    std::vector<int> axes(static_cast<size_t>(s.dim));
    for (int i = 0; i < s.dim; ++i) axes[static_cast<size_t>(i)] = i;
    Shape unit = normalize(s).shape;
    double defect = symmetry_defect(unit, axes, opts);
    if (defect > symmetry_tolerance)
        throw std::invalid_argument("sandwich_check requires a fully coordinate-symmetric set");

    SandwichResult r;
    r.lambda0 = barycentric_asymmetry(s, opts);
    r.lambda = fraenkel_asymmetry(s, settings, opts).lambda;
    r.lower_slack = r.lambda0 - r.lambda;
    r.upper_slack = std::pow(2.0, s.dim) * r.lambda - r.lambda0;
    r.lower_ok = r.lower_slack >= -1e-12;
    r.upper_ok = r.upper_slack >= -1e-12;
    return r;
}

AsymmetryReport asymmetry_report(const Shape& s, const OptimizerSettings& settings,
                                 const MeasureOptions& opts) {
    AsymmetryReport rep;
    rep.deficit = deficit(s, opts);
    rep.lambda0 = barycentric_asymmetry(s, opts);
    FraenkelResult fr = fraenkel_asymmetry(s, settings, opts);
    rep.fraenkel = fr.lambda;
    rep.fraenkel_center = fr.center;
    rep.epsilon_f = fr.epsilon_f;
    rep.optimizer_evals = fr.evaluations;
    rep.budget_exhausted = fr.budget_exhausted;
    rep.tolerance = settings.tolerance;
    return rep;
}

}  // namespace isoq
