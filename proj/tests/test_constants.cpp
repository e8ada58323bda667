#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isoq/constants.hpp"

using namespace isoq;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE_BEGIN("constants");

TEST_CASE("unit ball volumes") {
    CHECK(omega(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(omega(2) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(omega(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(omega(5) == doctest::Approx(5.2637890139143246).epsilon(1e-13));
    CHECK_THROWS(omega(0));
}

TEST_CASE("isoperimetric perimeter matches ball surface") {
    for (int n : {2, 3, 4}) {
        double r = 1.37;
        double m = omega(n) * std::pow(r, n);
        CHECK(isoperimetric_perimeter(n, m) ==
              doctest::Approx(n * omega(n) * std::pow(r, n - 1)).epsilon(1e-13));
    }
}

// Reference values below were recomputed independently at high precision
// from the defining formulas before being frozen here.
TEST_CASE("c1 value and homogeneity") {
    CHECK(c1(2, 1.0) == doctest::Approx(2.01460609254827059).epsilon(1e-14));
    CHECK(c1(3, 1.0) == doctest::Approx(2.01498994252058705).epsilon(1e-14));
    CHECK(c1(2, 2.0) == doctest::Approx(2.0 * c1(2, 1.0)).epsilon(1e-14));
    CHECK(c1(2, 1.0) ==
          doctest::Approx(2.0 / std::sqrt(kPi) + std::sqrt(kPi) / 2.0).epsilon(1e-14));
    CHECK_THROWS(c1(2, 0.0));
}

TEST_CASE("c2 value, limit and monotonicity") {
    CHECK(c2(2, 1.0) == doctest::Approx(2.86876540619564434).epsilon(1e-14));
    CHECK(c2(3, 1.0) == doctest::Approx(2.41872479887267751).epsilon(1e-14));
    CHECK(c2(2, 1e-9) == doctest::Approx(std::sqrt(std::pow(2.0, -1.5) / kPi)).epsilon(1e-6));
    double prev = 0;
    for (double cf = 0.25; cf <= 4.0; cf *= 2) {
        double v = c2(2, cf);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("c3 value and branch structure") {
    CHECK(c3(2, 1.0) == doctest::Approx(6.0599248601328637).epsilon(1e-14));
    CHECK(c3(3, 1.0) == doctest::Approx(5.01016302138997676).epsilon(1e-14));
    for (int n : {2, 3, 4, 5}) {
        double third = 1.0 / (2.0 * std::pow(omega(n), 1.0 / n));
        CHECK(c3(n, 1.0) >= third);
        // for c_f >= 1 the max is never realized by the dimensional floor
        for (double cf : {1.0, 2.0, 10.0}) CHECK(c3(n, cf) > third + 1e-9);
    }
    double prev = 0;
    for (double cf = 0.5; cf <= 8.0; cf *= 2) {
        double v = c3(2, cf);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("chain recursion agrees with the closed form") {
    for (int n : {2, 3, 4, 5}) {
        for (double d : {1.0, 10.0, 100.0}) {
            double dd = std::max(d, diameter_floor(n));
            auto chain = constant_chain(n, dd, 1.0);
            REQUIRE(chain.size() == static_cast<size_t>(n) + 1);
            double closed = c0_closed_form(n, dd, 1.0);
            CHECK(chain.back() == doctest::Approx(closed).epsilon(1e-12));
            for (double entry : chain) CHECK(entry >= std::pow(2.0, n) * 1.0 - 1e-9);
        }
    }
    CHECK_THROWS(constant_chain(2, 0.5, 1.0));  // below the isodiametric floor
}

TEST_CASE("chain scaling in the diameter") {
    double d = 7.0;
    CHECK(c0_closed_form(2, 2 * d, 1.0) / c0_closed_form(2, d, 1.0) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c0_closed_form(3, 2 * d, 1.0) / c0_closed_form(3, d, 1.0) ==
          doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("worked closed-form values") {
    CHECK(c0_closed_form(2, 4.0, 1.0) == doctest::Approx(7050.75634760761106).epsilon(1e-12));
    CHECK(fuglede_diameter(2) == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-14));
    CHECK(fuglede_diameter(3) == doctest::Approx(7.4442058907928002).epsilon(1e-13));
    for (int n = 2; n <= 6; ++n) CHECK(fuglede_diameter(n) > 0);
}

TEST_CASE("planar connected-set constant") {
    CHECK(bch_constant(1.0) == doctest::Approx(5537.65108597391837).epsilon(1e-12));
    CHECK(bch_constant(1e-12) == doctest::Approx(2.0));
    double prev = 0;
    for (double cf = 0.5; cf <= 8.0; cf *= 2) {
        double v = bch_constant(cf);
        CHECK(v >= prev);
        CHECK(v >= 2.0);
        prev = v;
    }
}

TEST_CASE("constants table assembly") {
    ConstantsTable t = make_constants(2, 4.0, 1.0);
    CHECK(t.omegas.size() == 2);
    CHECK(t.chain.size() == 3);
    CHECK(t.c0 == doctest::Approx(t.chain.back()).epsilon(1e-12));
    // d below the floor is clamped up
    ConstantsTable clamped = make_constants(2, 0.1, 1.0);
    CHECK(clamped.d == doctest::Approx(diameter_floor(2)));
    CHECK_THROWS(make_constants(2, 4.0, -1.0));
}

TEST_CASE("both diameter floor readings are available") {
    CHECK(diameter_floor(2, DiameterFloor::isodiametric) ==
          doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(1e-14));
    CHECK(diameter_floor(2, DiameterFloor::alternate) ==
          doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-14));
    CHECK(diameter_floor(2, DiameterFloor::isodiametric) <
          diameter_floor(2, DiameterFloor::alternate));
}

TEST_SUITE_END();
