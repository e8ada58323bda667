#include "isoq/balls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isoq/constants.hpp"

namespace isoq {

namespace {

// J_p(a) = integral of (1 - u^2)^p over [a, 1], for p = (n-1)/2 with n >= 1.
// Integer and half-integer p are reached from the two closed-form bases by
// the upward recurrence J_p = (2p J_{p-1} - a (1 - a^2)^p) / (2p + 1),
// obtained from integrating d/du [u (1-u^2)^p].
double profile_integral(int n, double a) {
    a = std::clamp(a, -1.0, 1.0);
    double j;
    int steps;
    if (n % 2 == 1) {  // p integer: base p = 0
        j = 1.0 - a;
        steps = (n - 1) / 2;
    } else {  // p half-integer: base p = 1/2
        j = 0.5 * (std::acos(a) - a * std::sqrt(std::max(0.0, 1.0 - a * a)));
        steps = (n - 2) / 2;
    }
    double p = (n % 2 == 1) ? 0.0 : 0.5;
    for (int s = 0; s < steps; ++s) {
        p += 1.0;
        j = (2.0 * p * j - a * std::pow(1.0 - a * a, p)) / (2.0 * p + 1.0);
    }
    return j;
}

}  // namespace

double ball_volume(int n, double r) { return omega(n) * std::pow(r, n); }

double ball_surface(int n, double r) { return n * omega(n) * std::pow(r, n - 1); }

double cap_volume(int n, double r, double t) {
    if (r <= 0) return 0.0;
    if (t <= -r) return ball_volume(n, r);
    if (t >= r) return 0.0;
    double wm = (n >= 2) ? omega(n - 1) : 1.0;  // n = 1: sections are points
    return wm * std::pow(r, n) * profile_integral(n, t / r);
}

double cap_moment(int n, double r, double t) {
    t = std::clamp(t, -r, r);
    double wm = (n >= 2) ? omega(n - 1) : 1.0;
    return wm * std::pow(r * r - t * t, 0.5 * (n + 1)) / (n + 1);
}

double ball_overlap_volume(int n, double r1, double r2, double d) {
    d = std::abs(d);
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) return ball_volume(n, std::min(r1, r2));
    // Split plane through the intersection sphere: distance x1 from the
    // first center, d - x1 from the second.
    double x1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    return cap_volume(n, r1, x1) + cap_volume(n, r2, d - x1);
}

double cap_radius_for_volume(int n, double c1, double target_volume) {
    if (!(target_volume > 0)) throw std::invalid_argument("cap volume must be positive");
    // Volume of {x in B(c, rho): x_1 > 0} = cap_volume(n, rho, -c1), strictly
    // increasing in rho. Bracket then bisect.
    auto vol = [&](double rho) { return cap_volume(n, rho, -c1); };
    double lo = 0.0;
    double hi = std::max(1.0, std::abs(c1) * 2.0);
    while (vol(hi) < target_volume) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("cap_radius_for_volume: bracket failed");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (vol(mid) < target_volume ? lo : hi) = mid;
        if (hi - lo <= 1e-10 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace isoq
