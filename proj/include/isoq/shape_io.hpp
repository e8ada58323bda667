#pragma once

#include <string>

#include "isoq/shape.hpp"

namespace isoq {

/// Raised on malformed shape documents; carries an approximate byte offset
/// into the input where the problem was detected.
struct ShapeParseError : std::runtime_error {
    ShapeParseError(const std::string& msg, size_t byte_offset);
    size_t byte_offset = 0;
};

/// Parses one shape document:
///   {"dim": N, "body": {"type": "ball"|"box"|"polygon"|"voxel"|"union", ...}}
/// Field sets are fixed per type; unknown fields are rejected. Voxel
/// occupancy is a run-length list of [start, length] pairs over row-major
/// cell order. Axis indices in documents are 1-based.
Shape parse_shape(const std::string& text);

Shape load_shape_file(const std::string& path);

std::string shape_to_json(const Shape& s);

}  // namespace isoq
