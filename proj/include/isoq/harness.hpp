#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isoq/asymmetry.hpp"
#include "isoq/constants.hpp"
#include "isoq/measures.hpp"
#include "isoq/shape.hpp"
#include "isoq/symmetrization.hpp"

namespace isoq {

enum class Family { perturbed_ball, two_ball, dumbbell, random_polygon, k_symmetric_random };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct CorpusItem {
    std::string id;
    Shape shape;
    Family family = Family::perturbed_ball;
    std::map<std::string, double> params;
    uint64_t seed = 0;
};

struct Check {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    bool pass = true;
    bool advisory = false;  // reported but never gates the run
};

struct VerificationReport {
    std::string item_id;
    std::vector<Check> checks;
    double timing_ms = 0;
    bool passed() const;
};

// Deterministic generator helpers. Each corpus item draws its own stream
// seeded by hash(corpus seed, index), so worker count cannot reorder draws.
uint64_t item_seed(uint64_t corpus_seed, uint64_t index);

/// Unit ball at the origin plus a ball of the given radius at distance d
/// along the first axis; components must not overlap.
Shape gen_two_ball(int n, double radius, double distance);

struct DependanceShape {
    Shape shape;
    double delta_closed = 0;    // (1-eps)^((n-1)/n) + eps^((n-1)/n) - 1
    double lambda0_closed = 2;  // barycentric ball misses both components
    double diameter_closed = 0;
};

/// Ball of volume 1-eps at the origin plus a ball of volume eps centered at
/// distance 3/eps along the first axis.
DependanceShape gen_dependance_family(int n, double eps);

/// Nearly spherical set with a seeded low-mode radial perturbation:
/// a polygon in 2D, a voxelized radial graph in 3D.
Shape gen_perturbed_ball(int n, double amplitude, int modes, uint64_t seed);

/// Seeded star polygon, optionally stretched, always simple and connected.
Shape gen_random_polygon(uint64_t seed);

/// Star polygon symmetric about both coordinate axes, built from one
/// quadrant and mirrored so the symmetry is exact in floating point.
Shape gen_k_symmetric_random(uint64_t seed);

/// Two balls joined by a thin box connector (dimension >= 3).
Shape gen_dumbbell(int n, double separation, double connector_halfwidth, uint64_t seed);

std::vector<CorpusItem> generate_corpus(Family family, int n, int count, uint64_t corpus_seed);

// Verification suites. Every check records lhs, rhs and slack so reports
// can be plotted directly.
VerificationReport verify_summary_invariants(const CorpusItem& item,
                                             const MeasureOptions& opts = {});
VerificationReport verify_main_theorem(const CorpusItem& item, const ConstantsTable& constants,
                                       const MeasureOptions& opts = {});
VerificationReport verify_section2_suite(const CorpusItem& item, const ConstantsTable& constants,
                                         const OptimizerSettings& settings = {},
                                         const MeasureOptions& opts = {});
VerificationReport verify_convex_section_bound(const Shape& s, const std::string& item_id,
                                               const MeasureOptions& opts = {});
VerificationReport verify_bch(const CorpusItem& item, double c_f,
                              const MeasureOptions& opts = {});

struct SweepRow {
    double eps = 0;
    double d = 0;
    double lambda0 = 0;
    double delta = 0;
    double ratio = 0;  // lambda0 / sqrt(delta)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double fitted_slope = 0;      // least squares on log(ratio) vs log(d)
    double expected_slope = 0;    // (n-1) / (2n)
};

/// Evaluates the two-ball family over the epsilon grid and fits the growth
/// of lambda0 / sqrt(delta) against the diameter. Needs >= 3 grid points.
SweepResult d_sweep(int n, const std::vector<double>& eps_grid);

struct VerifyRunConfig {
    std::vector<Family> families{Family::perturbed_ball};
    int n = 2;
    int count = 20;
    uint64_t seed = 1;
    double c_f = 1.0;
    int workers = 1;
    bool with_section2 = true;
    bool with_bch = true;
    OptimizerSettings optimizer;
    MeasureOptions measure;
};

struct VerifyRunResult {
    std::vector<CorpusItem> items;
    std::vector<VerificationReport> reports;  // ordered by item id
    bool all_passed = true;
};

/// Runs every applicable suite over a generated corpus; items are verified
/// independently (possibly concurrently) and aggregated in item order.
VerifyRunResult run_verification(const VerifyRunConfig& config);

// Report writers. Timing fields are emitted only when include_timing is
// set, so that reruns compare byte for byte.
std::string reports_to_json(const VerifyRunResult& result, const ConstantsTable& constants,
                            bool include_timing);
std::string reports_to_csv(const VerifyRunResult& result);
std::string constants_to_json(const ConstantsTable& t);
std::string sweep_to_json(const SweepResult& r);
std::string sweep_to_csv(const SweepResult& r);

}  // namespace isoq
