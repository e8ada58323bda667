#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isoq/measures.hpp"
#include "isoq/shape.hpp"
#include "isoq/shape_io.hpp"
#include "oracles.hpp"

using namespace isoq;

namespace {
constexpr double kPi = std::numbers::pi;

Shape unit_square_at_origin() {
    return make_box(Vec{-0.5, -0.5}, Vec{0.5, 0.5});
}

Shape two_ball_shape() {
    return make_union({make_ball(Vec{0, 0}, 1.0), make_ball(Vec{200, 0}, 0.1)}, true);
}
}  // namespace

TEST_SUITE_BEGIN("shape");

TEST_CASE("reflect mirrors a ball") {
    Shape b = make_ball(Vec{1, 0}, 0.5);
    Shape m = reflect(b, Hyperplane{0, 0.0});
    const Ball& mb = std::get<Ball>(m.body);
    CHECK(mb.center[0] == doctest::Approx(-1.0));
    CHECK(mb.center[1] == doctest::Approx(0.0));
    CHECK(mb.radius == doctest::Approx(0.5));
    CHECK_THROWS(reflect(b, Hyperplane{3, 0.0}));
}

TEST_CASE("reflect fixes symmetric shapes") {
    Shape s = unit_square_at_origin();
    Shape m = reflect(s, Hyperplane{0, 0.0});
    CHECK(symdiff_volume(s, m).value == doctest::Approx(0.0));
}

TEST_CASE("reflect maps the unit square across a plane") {
    Shape s = make_box(Vec{0, 0}, Vec{1, 1});
    Shape m = reflect(s, Hyperplane{0, 0.0});
    const AxisBox& mb = std::get<AxisBox>(m.body);
    CHECK(mb.lo[0] == doctest::Approx(-1.0));
    CHECK(mb.hi[0] == doctest::Approx(0.0));
    CHECK(volume(m) == doctest::Approx(1.0));
}

TEST_CASE("reflect is an involution") {
    Shape shapes[] = {make_ball(Vec{0.3, -0.7}, 1.1), unit_square_at_origin(), two_ball_shape()};
    for (const Shape& s : shapes) {
        Shape back = reflect(reflect(s, Hyperplane{0, 0.25}), Hyperplane{0, 0.25});
        CHECK(symdiff_volume(s, back).value == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("clip splits volume exactly") {
    Shape ball = make_ball(Vec{0, 0}, 1.0 / std::sqrt(kPi));  // unit area
    Shape plus = clip_halfspace(ball, Hyperplane{0, 0.0}, ClipSign::positive);
    CHECK(volume(plus) == doctest::Approx(0.5).epsilon(1e-5));

    Shape box = make_box(Vec{0, 0}, Vec{1, 1});
    Shape right = clip_halfspace(box, Hyperplane{0, 0.25}, ClipSign::positive);
    CHECK(volume(right) == doctest::Approx(0.75).epsilon(1e-14));

    Shape tb = two_ball_shape();
    Shape far_part = clip_halfspace(tb, Hyperplane{0, 100.0}, ClipSign::positive);
    CHECK(volume(far_part) == doctest::Approx(0.01 * kPi).epsilon(1e-14));
    Shape near_part = clip_halfspace(tb, Hyperplane{0, 100.0}, ClipSign::negative);
    CHECK(volume(near_part) == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("clip partition property on polygons") {
    Ring ring;
    for (int j = 0; j < 100; ++j) {
        double th = 2 * kPi * (j + 0.5) / 100;
        double r = 1 + 0.2 * std::cos(3 * th + 0.4);
        ring.push_back({r * std::cos(th), r * std::sin(th)});
    }
    Shape poly = make_polygon(ring);
    double total = volume(poly);
    for (double off : {-0.4, 0.0, 0.3}) {
        Shape a = clip_halfspace(poly, Hyperplane{1, off}, ClipSign::positive);
        Shape b = clip_halfspace(poly, Hyperplane{1, off}, ClipSign::negative);
        CHECK(volume(a) + volume(b) == doctest::Approx(total).epsilon(1e-12));
    }
    // empty result is a legal empty shape, not an error
    Shape none = clip_halfspace(poly, Hyperplane{0, 50.0}, ClipSign::positive);
    CHECK(is_empty_shape(none));
    CHECK(volume(none) == 0.0);
}

TEST_CASE("normalize produces unit volume at the origin") {
    Shape ball = make_ball(Vec{3, 3}, 2.0);
    NormalizeResult r = normalize(ball);
    CHECK(volume(r.shape) == doctest::Approx(1.0).epsilon(1e-12));
    const Ball& nb = std::get<Ball>(r.shape.body);
    CHECK(nb.center[0] == doctest::Approx(0.0));
    CHECK(nb.radius == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-13));
    CHECK(r.shift[0] == doctest::Approx(3.0));

    // already normalized: identity transform
    NormalizeResult r2 = normalize(r.shape);
    CHECK(r2.scale == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r2.shift.norm() == doctest::Approx(0.0).epsilon(1e-12));

    // aspect ratio preserved
    Shape box = make_box(Vec{0, 0}, Vec{2, 0.5});
    NormalizeResult r3 = normalize(box);
    const AxisBox& nbx = std::get<AxisBox>(r3.shape.body);
    CHECK((nbx.hi[0] - nbx.lo[0]) / (nbx.hi[1] - nbx.lo[1]) == doctest::Approx(4.0));
    CHECK(volume(r3.shape) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(barycenter(r3.shape).norm() == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS(normalize(make_empty(2)));
}

TEST_CASE("voxelize accuracy and budget") {
    Shape disk = make_ball(Vec{0, 0}, 1.0 / std::sqrt(kPi));
    VoxelGrid g = voxelize(disk, 0.01);
    double vol = std::pow(0.01, 2) * static_cast<double>(g.occupied_count());
    CHECK(vol == doctest::Approx(1.0).epsilon(0.005));

    // grid-aligned unit square tiles exactly
    Shape sq = make_box(Vec{0, 0}, Vec{1, 1});
    VoxelGrid gs = voxelize(sq, 0.1);
    CHECK(std::pow(0.1, 2) * static_cast<double>(gs.occupied_count()) ==
          doctest::Approx(1.0).epsilon(1e-12));

    VoxelGrid ge = voxelize(make_empty(2), 0.1);
    CHECK(ge.occupied_count() == 0);

    CHECK_THROWS(voxelize(disk, 1e-6, 1 << 16));  // cell budget
}

TEST_CASE("voxelization error shrinks under halving") {
    Shape disk = make_ball(Vec{0.037, -0.021}, 0.83);
    double exact = volume(disk);
    double prev_err = 1e9;
    int improvements = 0;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
        VoxelGrid g = voxelize(disk, h);
        double err = std::abs(std::pow(h, 2) * static_cast<double>(g.occupied_count()) - exact);
        if (err <= prev_err) ++improvements;
        prev_err = err;
    }
    CHECK(improvements >= 3);  // monotone on average
}

TEST_CASE("voxel reflect requires aligned planes") {
    Shape disk = make_ball(Vec{0, 0}, 0.5);
    VoxelGrid g = voxelize(disk, 0.1);
    Shape gs = make_grid(g, 2);
    CHECK_NOTHROW(reflect(gs, Hyperplane{0, 0.0}));
    CHECK_THROWS(reflect(gs, Hyperplane{0, 0.05 + 1e-3}));
    Shape mirrored = reflect(gs, Hyperplane{0, 0.0});
    CHECK(volume(mirrored) == doctest::Approx(volume(gs)).epsilon(1e-12));
}

TEST_CASE("shape json round trip") {
    Shape shapes[] = {make_ball(Vec{1, 2}, 0.7), make_box(Vec{-1, 0}, Vec{2, 3}),
                      two_ball_shape()};
    for (const Shape& s : shapes) {
        Shape back = parse_shape(shape_to_json(s));
        CHECK(back.dim == s.dim);
        CHECK(symdiff_volume(s, back).value == doctest::Approx(0.0).epsilon(1e-12));
    }
    // voxel round trip with run-length occupancy
    VoxelGrid g = voxelize(make_ball(Vec{0, 0}, 0.4), 0.05);
    Shape gs = make_grid(g, 2);
    Shape back = parse_shape(shape_to_json(gs));
    const VoxelGrid& gb = std::get<VoxelGrid>(back.body);
    CHECK(gb.occupancy == std::get<VoxelGrid>(gs.body).occupancy);
    CHECK(gb.spacing == doctest::Approx(0.05));
}

TEST_CASE("parser rejects malformed documents") {
    CHECK_THROWS_AS(parse_shape("{"), ShapeParseError);
    CHECK_THROWS_AS(parse_shape(R"({"dim": 2})"), ShapeParseError);
    CHECK_THROWS_AS(
        parse_shape(R"({"dim": 2, "body": {"type": "ball", "center": [0,0], "radius": -1}})"),
        ShapeParseError);
    CHECK_THROWS_AS(
        parse_shape(
            R"({"dim": 2, "body": {"type": "ball", "center": [0,0], "radius": 1, "bogus": 3}})"),
        ShapeParseError);
    CHECK_THROWS_AS(
        parse_shape(R"({"dim": 2, "body": {"type": "blob"}})"), ShapeParseError);
    // parse errors carry a byte offset
    try {
        parse_shape("{\"dim\": 2, \n not json");
        CHECK(false);
    } catch (const ShapeParseError& e) {
        CHECK(e.byte_offset > 0);
    }
}

TEST_CASE("polygon validation on parse") {
    CHECK_THROWS(parse_shape(
        R"({"dim": 2, "body": {"type": "polygon", "vertices": [[0,0],[1,1],[1,0],[0,1]]}})"));
    Shape tri = parse_shape(
        R"({"dim": 2, "body": {"type": "polygon", "vertices": [[0,0],[1,0],[0,1]]}})");
    CHECK(volume(tri) == doctest::Approx(0.5));
}

TEST_SUITE_END();
