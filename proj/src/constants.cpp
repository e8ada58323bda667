#include "isoq/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isoq {

namespace {

void require_dim(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
}

void require_cf(double c_f) {
    if (!(c_f > 0)) throw std::invalid_argument("c_f must be positive");
}

}  // namespace

double omega(int n) {
    require_dim(n);
    // pi^(n/2) / Gamma(n/2 + 1)
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double ball_radius_for_volume(int n, double m) {
    return std::pow(m / omega(n), 1.0 / n);
}

double isoperimetric_perimeter(int n, double m) {
    return n * std::pow(omega(n), 1.0 / n) * std::pow(m, double(n - 1) / n);
}

double diameter_floor(int n, DiameterFloor mode) {
    double e = (mode == DiameterFloor::isodiametric) ? -1.0 / n : 1.0 / n;
    return 2.0 * std::pow(omega(n), e);
}

double c1(int n, double c_f) {
    require_cf(c_f);
    double wn = omega(n), wm = omega(n - 1);
    return c_f * (wm / std::pow(wn, double(n - 1) / n) + std::pow(wn, 1.0 / n) / 2.0);
}

double c2(int n, double c_f) {
    double wn = omega(n);
    double a = std::pow(2.0, 1.0 / n - 2.0) * std::pow(wn, -2.0 / n);
    double b = std::pow(2.0, 2.0 + 2.0 / n) * (double(n - 1) / (double(n) * n));
    double C1 = c1(n, c_f);
    return std::sqrt(a + b * C1 * C1);
}

double c3(int n, double c_f) {
    double wn = omega(n), wm = omega(n - 1);
    double first = 8.0 * c1(n, c_f) / (std::pow(2.0, n) * c_f);
    double second = 2.0 * c2(n, c_f) +
                    std::pow(2.0, 3.0 - n) * wm / (7.0 * std::pow(wn, double(n - 1) / n));
    double third = 1.0 / (2.0 * std::pow(wn, 1.0 / n));
    return std::max({first, second, third});
}

std::vector<double> constant_chain(int n, double d, double c_f, DiameterFloor mode) {
    require_cf(c_f);
    if (d < diameter_floor(n, mode))
        throw std::invalid_argument("diameter bound below the active floor");
    double C3 = c3(n, c_f);
    // Unrolling one induction step from C_k needs C_k evaluated at 3D, so the
    // entry for C_{N-j}(N, D) carries a 3^j factor on the base argument.
    std::vector<double> chain;
    chain.reserve(static_cast<size_t>(n) + 1);
    double base = std::pow(2.0, n) * c_f;
    chain.push_back(base);  // C_N(N, D), independent of D
    for (int j = 1; j <= n; ++j) {
        // C_{N-j}(N, D) = C3 * C_{N-j+1}(N, 3D) * D. Since every entry is a
        // pure power law in its diameter argument through the j-1 earlier
        // steps, C_{N-j+1}(N, 3D) = C_{N-j+1}(N, D) * 3^(j-1).
        chain.push_back(C3 * chain.back() * std::pow(3.0, j - 1) * d);
    }
    return chain;
}

double c0_closed_form(int n, double d, double c_f) {
    require_cf(c_f);
    return std::pow(2.0, n) * c_f * std::pow(c3(n, c_f), n) *
           std::pow(3.0, 0.5 * n * (n - 1)) * std::pow(d, n);
}

double fuglede_diameter(int n) {
    if (n < 2) throw std::invalid_argument("fuglede_diameter needs n >= 2");
    return std::pow(2.0 * n / (n - 1.0), n - 1.0) *
           std::pow(omega(n), double(n - 1) / n) / omega(n - 1);
}

double bch_constant(double c_f) {
    double d = 2.0 * std::sqrt(std::numbers::pi);
    return std::max(2.0, c0_closed_form(2, d, c_f));
}

ConstantsTable make_constants(int n, double d, double c_f, DiameterFloor mode) {
    require_dim(n);
    require_cf(c_f);
    ConstantsTable t;
    t.n = n;
    t.c_f = c_f;
    t.floor_mode = mode;
    t.d = std::max(d, diameter_floor(n, mode));
    t.omegas.resize(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) t.omegas[static_cast<size_t>(i - 1)] = omega(i);
    t.c1 = c1(n, c_f);
    t.c2 = c2(n, c_f);
    t.c3 = c3(n, c_f);
    t.chain = constant_chain(n, t.d, c_f, mode);
    t.c0 = c0_closed_form(n, t.d, c_f);
    t.fuglede_d = fuglede_diameter(std::max(n, 2));
    t.bch = bch_constant(c_f);
    return t;
}

}  // namespace isoq
