#include "isoq/shape_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace isoq {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg, size_t offset = 0) {
    throw ShapeParseError(msg, offset);
}

void check_fields(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail("unknown field '" + it.key() + "' in " + where);
}

Vec parse_point(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(where + " must be an array of " + std::to_string(dim) + " numbers");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = j[static_cast<size_t>(i)].get<double>();
    return v;
}

Shape parse_body(const json& j, int dim) {
    if (!j.is_object()) fail("body must be an object");
    std::string type = j.value("type", std::string{});
    if (type == "ball") {
        check_fields(j, {"type", "center", "radius"}, "ball");
        return make_ball(parse_point(j.at("center"), dim, "center"), j.at("radius").get<double>());
    }
    if (type == "box") {
        check_fields(j, {"type", "min", "max"}, "box");
        return make_box(parse_point(j.at("min"), dim, "min"), parse_point(j.at("max"), dim, "max"));
    }
    if (type == "polygon") {
        check_fields(j, {"type", "vertices"}, "polygon");
        if (dim != 2) fail("polygon bodies require dim = 2");
        Ring ring;
        for (const auto& v : j.at("vertices")) {
            Vec p = parse_point(v, 2, "vertex");
            ring.push_back({p[0], p[1]});
        }
        return make_polygon(std::move(ring));
    }
    if (type == "voxel") {
        check_fields(j, {"type", "origin", "spacing", "dims", "runs"}, "voxel");
        VoxelGrid g;
        g.origin = parse_point(j.at("origin"), dim, "origin");
        g.spacing = j.at("spacing").get<double>();
        const auto& dims = j.at("dims");
        if (static_cast<int>(dims.size()) != dim) fail("dims must list one extent per axis");
        for (int i = 0; i < dim; ++i) {
            g.dims[static_cast<size_t>(i)] = dims[static_cast<size_t>(i)].get<int>();
            if (g.dims[static_cast<size_t>(i)] <= 0) fail("dims entries must be positive");
        }
        g.occupancy.assign(g.cell_count(), 0);
        for (const auto& run : j.at("runs")) {
            if (!run.is_array() || run.size() != 2) fail("runs must be [start, length] pairs");
            size_t start = run[0].get<size_t>();
            size_t len = run[1].get<size_t>();
            if (start + len > g.occupancy.size()) fail("voxel run exceeds the grid");
            std::fill(g.occupancy.begin() + static_cast<long>(start),
                      g.occupancy.begin() + static_cast<long>(start + len), uint8_t{1});
        }
        return make_grid(std::move(g), dim);
    }
    if (type == "union") {
        check_fields(j, {"type", "disjoint", "parts"}, "union");
        std::vector<Shape> parts;
        for (const auto& p : j.at("parts")) parts.push_back(parse_body(p, dim));
        return make_union(std::move(parts), j.value("disjoint", false));
    }
    fail("unknown body type '" + type + "'");
}

ordered body_to_json(const Shape& s) {
    return std::visit(
        [&](const auto& b) -> ordered {
            using T = std::decay_t<decltype(b)>;
            ordered j;
            if constexpr (std::is_same_v<T, Ball>) {
                j["type"] = "ball";
                std::vector<double> c(static_cast<size_t>(s.dim));
                for (int i = 0; i < s.dim; ++i) c[static_cast<size_t>(i)] = b.center[i];
                j["center"] = c;
                j["radius"] = b.radius;
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                j["type"] = "box";
                std::vector<double> lo(static_cast<size_t>(s.dim)), hi(static_cast<size_t>(s.dim));
                for (int i = 0; i < s.dim; ++i) {
                    lo[static_cast<size_t>(i)] = b.lo[i];
                    hi[static_cast<size_t>(i)] = b.hi[i];
                }
                j["min"] = lo;
                j["max"] = hi;
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                j["type"] = "polygon";
                std::vector<std::array<double, 2>> verts;
                verts.reserve(b.ring.size());
                for (const P2& p : b.ring) verts.push_back({p.x, p.y});
                j["vertices"] = verts;
            } else if constexpr (std::is_same_v<T, VoxelGrid>) {
                j["type"] = "voxel";
                std::vector<double> o(static_cast<size_t>(s.dim));
                std::vector<int> dims(static_cast<size_t>(s.dim));
                for (int i = 0; i < s.dim; ++i) {
                    o[static_cast<size_t>(i)] = b.origin[i];
                    dims[static_cast<size_t>(i)] = b.dims[static_cast<size_t>(i)];
                }
                j["origin"] = o;
                j["spacing"] = b.spacing;
                j["dims"] = dims;
                std::vector<std::array<size_t, 2>> runs;
                size_t n = b.occupancy.size();
                for (size_t f = 0; f < n;) {
                    if (!b.occupancy[f]) {
                        ++f;
                        continue;
                    }
                    size_t start = f;
                    while (f < n && b.occupancy[f]) ++f;
                    runs.push_back({start, f - start});
                }
                j["runs"] = runs;
            } else {
                j["type"] = "union";
                j["disjoint"] = b.disjoint;
                ordered parts = ordered::array();
                for (const Shape& p : b.parts) parts.push_back(body_to_json(p));
                j["parts"] = parts;
            }
            return j;
        },
        s.body);
}

}  // namespace

ShapeParseError::ShapeParseError(const std::string& msg, size_t offset)
    : std::runtime_error("shape parse error at byte " + std::to_string(offset) + ": " + msg),
      byte_offset(offset) {}

Shape parse_shape(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what(), e.byte);
    }
    if (!j.is_object()) fail("top level must be an object");
    check_fields(j, {"dim", "body"}, "shape document");
    if (!j.contains("dim") || !j.contains("body")) fail("shape document needs 'dim' and 'body'");
    int dim = j.at("dim").get<int>();
    if (dim < 2 || dim > kMaxDim) fail("dim out of supported range");
    try {
        Shape s = parse_body(j.at("body"), dim);
        validate_shape(s);
        return s;
    } catch (const ShapeParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail(e.what());
    }
}

Shape load_shape_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open shape file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_shape(ss.str());
}

std::string shape_to_json(const Shape& s) {
    ordered j;
    j["dim"] = s.dim;
    j["body"] = body_to_json(s);
    return j.dump(2);
}

}  // namespace isoq
