#pragma once

#include "isoq/measures.hpp"
#include "isoq/shape.hpp"

namespace isoq {

struct OptimizerSettings {
    long budget = 2000;       // total objective evaluations
    int coarse_resolution = 17;  // candidate centers per axis in the scan stage
    double tolerance = 1e-9;  // simplex convergence threshold
};

struct FraenkelResult {
    double lambda = 0;
    Vec center;
    double epsilon_f = 0;  // | |B_F cap {x_1 > 0}| - 1/2 | on the normalized shape
    long evaluations = 0;
    bool budget_exhausted = false;
};

struct AsymmetryReport {
    double deficit = 0;
    double lambda0 = 0;
    double fraenkel = 0;
    Vec fraenkel_center;
    double epsilon_f = 0;
    long optimizer_evals = 0;
    bool budget_exhausted = false;
    double tolerance = 0;  // quadrature/optimizer tolerance in effect
};

/// Isoperimetric deficit (P(E) - P(B(m))) / P(B(m)) with m = |E|.
double deficit(const Shape& s, const MeasureOptions& opts = {});

/// |E delta (bar(E) + B(m))| / |E|. Returns 2 exactly for analytic ball
/// unions whose barycentric ball provably misses every component.
double barycentric_asymmetry(const Shape& s, const MeasureOptions& opts = {});

/// Minimizes x -> |E delta (x + B(m))| / |E| by a coarse center scan
/// followed by simplex descent from the best candidates, the barycenter and
/// the component barycenters. The result never exceeds the barycentric
/// value. epsilon_f is evaluated on the unit-volume normalization of s.
FraenkelResult fraenkel_asymmetry(const Shape& s, const OptimizerSettings& settings = {},
                                  const MeasureOptions& opts = {});

struct SandwichResult {
    bool lower_ok = false;  // fraenkel <= barycentric
    bool upper_ok = false;  // barycentric <= 2^N * fraenkel
    double lower_slack = 0;
    double upper_slack = 0;
    double lambda = 0;
    double lambda0 = 0;
};

/// Both inequalities relating the two asymmetries on a fully
/// coordinate-symmetric set. Throws if the symmetry defect exceeds the
/// tolerance.
SandwichResult sandwich_check(const Shape& s, double symmetry_tolerance = 1e-6,
                              const OptimizerSettings& settings = {},
                              const MeasureOptions& opts = {});

AsymmetryReport asymmetry_report(const Shape& s, const OptimizerSettings& settings = {},
                                 const MeasureOptions& opts = {});

}  // namespace isoq
