#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isoq/measures.hpp"

namespace isoq {

namespace {

// Tuning shared by both dimensions: ray spacing and sampling step are tied
// to the cell size, and occupancy flips shorter than kMinRun samples are
// absorbed. Sampling at twice the cell size deliberately aliases away the
// staircase teeth of the cell boundary, which is what makes the estimate
// converge to the boundary measure of the underlying smooth set instead of
// the inflated staircase length. Calibrated on voxelized disks:
// relative error ~5e-5 at 56 cells per radius, ~1e-3 over the working range.
constexpr double kRaySpacingFactor2D = 0.5;
constexpr double kRaySpacingFactor3D = 1.0;
constexpr double kStepFactor = 2.0;
constexpr int kMinRun = 2;
constexpr int kDirections2D = 32;
constexpr int kDirections3D = 98;

struct GridView {
    const VoxelGrid* g;
    int dim;
    double inv_h;
    bool occupied(const Vec& x) const {
        std::array<int, kMaxDim> idx{};
        for (int i = 0; i < dim; ++i) {
            double t = (x[i] - g->origin[i]) * inv_h;
            int k = static_cast<int>(std::floor(t));
            if (k < 0 || k >= g->dims[static_cast<size_t>(i)]) return false;
            idx[static_cast<size_t>(i)] = k;
        }
        return g->occupancy[g->index(idx, dim)] != 0;
    }
};

// Crossings along one ray: samples at step ds from start, nsteps of them,
// with short flips filtered out.
int ray_crossings(const GridView& grid, Vec start, const Vec& dir, double ds, int nsteps) {
    int crossings = 0;
    bool stable = false;
    int pending = 0;
    Vec x = start;
    Vec step = dir * ds;
    for (int s = 0; s < nsteps; ++s) {
        bool cur = grid.occupied(x);
        if (cur != stable) {
            if (++pending >= kMinRun) {
                ++crossings;
                stable = cur;
                pending = 0;
            }
        } else {
            pending = 0;
        }
        x += step;
    }
    return crossings;
}

double crofton2d(const VoxelGrid& g) {
    GridView view{&g, 2, 1.0 / g.spacing};
    double w = g.spacing * g.dims[0];
    double ht = g.spacing * g.dims[1];
    Vec center{g.origin[0] + 0.5 * w, g.origin[1] + 0.5 * ht};
    double radius = 0.5 * std::hypot(w, ht) + 2 * g.spacing;
    double dp = kRaySpacingFactor2D * g.spacing;
    double ds = kStepFactor * g.spacing;
    int nrays = static_cast<int>(2 * radius / dp) + 1;
    int nsteps = static_cast<int>(2 * radius / ds) + 2;
    double total = 0;
    for (int k = 0; k < kDirections2D; ++k) {
        double phi = (k + 0.5) * std::numbers::pi / kDirections2D;
        Vec u{std::cos(phi), std::sin(phi)};
        Vec v{-u[1], u[0]};
        long crossings = 0;
        for (int j = 0; j < nrays; ++j) {
            double p = -radius + (j + 0.5) * dp;
            Vec start = center + v * p - u * radius;
            crossings += ray_crossings(view, start, u, ds, nsteps);
        }
        total += static_cast<double>(crossings) * dp;
    }
    // length = (1/2) * integral over directions and offsets of the
    // crossing count; the direction integral runs over [0, pi).
    return 0.5 * (std::numbers::pi / kDirections2D) * total;
}

double crofton3d(const VoxelGrid& g) {
    GridView view{&g, 3, 1.0 / g.spacing};
    Vec extent{g.spacing * g.dims[0], g.spacing * g.dims[1], g.spacing * g.dims[2]};
    Vec center = g.origin + extent * 0.5;
    double radius = 0.5 * extent.norm() + 2 * g.spacing;
    double dp = kRaySpacingFactor3D * g.spacing;
    double ds = kStepFactor * g.spacing;
    int nrays = static_cast<int>(2 * radius / dp) + 1;
    int nsteps = static_cast<int>(2 * radius / ds) + 2;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    double total = 0;
    for (int k = 0; k < kDirections3D; ++k) {
        // Fibonacci hemisphere; lines are unoriented.
        double z = (k + 0.5) / kDirections3D;
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * k;
        Vec u{rho * std::cos(phi), rho * std::sin(phi), z};
        // orthonormal frame for the offset plane
        Vec v1 = std::abs(u[2]) < 0.9 ? Vec{-u[1], u[0], 0.0} : Vec{1.0, 0.0, 0.0};
        v1 = v1 - u * v1.dot(u);
        v1 *= 1.0 / v1.norm();
        Vec v2{u[1] * v1[2] - u[2] * v1[1], u[2] * v1[0] - u[0] * v1[2],
               u[0] * v1[1] - u[1] * v1[0]};
        long crossings = 0;
        for (int j1 = 0; j1 < nrays; ++j1) {
            double p1 = -radius + (j1 + 0.5) * dp;
            for (int j2 = 0; j2 < nrays; ++j2) {
                double p2 = -radius + (j2 + 0.5) * dp;
                if (p1 * p1 + p2 * p2 > radius * radius) continue;
                Vec start = center + v1 * p1 + v2 * p2 - u * radius;
                crossings += ray_crossings(view, start, u, ds, nsteps);
            }
        }
        total += static_cast<double>(crossings) * dp * dp;
    }
    // area = (1/pi) * integral over the hemisphere (solid angle 2*pi,
    // equal-weight directions) of the per-direction offset integrals.
    return (2.0 / kDirections3D) * total;
}

}  // namespace

double crofton_perimeter(const VoxelGrid& g, int dim) {
    if (g.occupied_count() == 0) return 0.0;
    if (dim == 2) return crofton2d(g);
    if (dim == 3) return crofton3d(g);
    throw std::invalid_argument("crofton perimeter supports dimensions 2 and 3");
}

}  // namespace isoq
