#pragma once

#include <vector>

namespace isoq {

/// Which lower bound is enforced on the relative diameter D of a unit-volume
/// set. The isodiametric inequality gives D >= 2*omega_N^(-1/N); the
/// alternative reading D >= 2*omega_N^(1/N) is kept available so inequality
/// suites can be rerun under either floor.
enum class DiameterFloor { isodiametric, alternate };

/// Volume of the unit ball in R^n.
double omega(int n);

/// Perimeter of the ball of volume m in R^n: n * omega^(1/n) * m^((n-1)/n).
/// This is the denominator of the isoperimetric deficit.
double isoperimetric_perimeter(int n, double m);

/// Radius of the ball of volume m in R^n.
double ball_radius_for_volume(int n, double m);

/// Lower bound for the relative diameter of a unit-volume set in R^n.
double diameter_floor(int n, DiameterFloor mode = DiameterFloor::isodiametric);

// Explicit constants of the reflection-symmetrization construction. All are
// evaluated as stated, as functions of the dimension and of the configured
// quantitative-isoperimetric constant c_f (which has no built-in default).
double c1(int n, double c_f);
double c2(int n, double c_f);
double c3(int n, double c_f);

/// The recursion C_{k-1}(N, D) = C3 * C_k(N, 3D) * D with base
/// C_N(N, D) = 2^N * c_f, unrolled from k = N down to k = 0. Entry j of the
/// result is C_{N-j}, so the list has N+1 entries ending with C_0(N, D).
std::vector<double> constant_chain(int n, double d, double c_f,
                                   DiameterFloor mode = DiameterFloor::isodiametric);

/// Closed form C_0(N, D) = 2^N * c_f * C3^N * 3^(N(N-1)/2) * D^N.
double c0_closed_form(int n, double d, double c_f);

/// Diameter scale used to recover the convex-set inequality:
/// (2N/(N-1))^(N-1) * omega_N^((N-1)/N) / omega_{N-1}.
double fuglede_diameter(int n);

/// Constant for the planar connected-set inequality: max{2, C_0(2, 2*sqrt(pi))}.
double bch_constant(double c_f);

struct ConstantsTable {
    int n = 2;
    double d = 0;    // relative diameter bound, clamped to the active floor
    double c_f = 0;  // configured quantitative-isoperimetric constant
    DiameterFloor floor_mode = DiameterFloor::isodiametric;
    std::vector<double> omegas;  // omega_1 .. omega_n
    double c1 = 0, c2 = 0, c3 = 0;
    std::vector<double> chain;  // C_N(N, D) .. C_0(N, D)
    double c0 = 0;
    double fuglede_d = 0;
    double bch = 0;
};

/// Evaluates every constant for the given configuration. Requires c_f > 0;
/// d is clamped up to the active diameter floor.
ConstantsTable make_constants(int n, double d, double c_f,
                              DiameterFloor mode = DiameterFloor::isodiametric);

}  // namespace isoq
