#pragma once

#include "isoq/vec.hpp"

namespace isoq {

/// Volume of the ball of radius r in R^n.
double ball_volume(int n, double r);

/// Surface measure of the sphere of radius r in R^n.
double ball_surface(int n, double r);

/// Volume of the cap {x in B(0, r) : x_1 > t}. Monotone decreasing in t,
/// equal to the full ball for t <= -r and 0 for t >= r.
double cap_volume(int n, double r, double t);

/// First-coordinate moment of the same cap, i.e. the integral of x_1 over
/// {x in B(0, r) : x_1 > t}. Closed form omega_{n-1} (r^2 - t^2)^((n+1)/2)
/// / (n+1), valid for every t in [-r, r].
double cap_moment(int n, double r, double t);

/// Volume of the intersection of B(0, r1) and B(d e_1, r2).
double ball_overlap_volume(int n, double r1, double r2, double d);

/// Radius rho such that the cap {x in B(c, rho) : x_1 > 0} has the given
/// volume, where c has first coordinate c1. Solved by monotone bisection to
/// 1e-10 relative accuracy.
double cap_radius_for_volume(int n, double c1, double target_volume);

}  // namespace isoq
