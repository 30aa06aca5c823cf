#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "plw/capacity.hpp"
#include "plw/geometry.hpp"
#include "plw/pde.hpp"

namespace plw::cli {

// {"n": nodes per axis, "h": spacing, "bbox": [center..., half_edge],
//  "inside": "bit:count,bit:count,..." over nodes with x fastest}
nlohmann::ordered_json domain_to_json(const GridDomain& E);
GridDomain domain_from_json(const nlohmann::json& j);

std::string encode_runs(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> decode_runs(const std::string& text, std::size_t expected);

// A benchmark name or a path to a domain JSON file.
GridDomain load_domain(const std::string& spec, const BenchmarkParams& params);

// "x,y[,z]"
Point parse_point(const std::string& text, int dim);
// "cube:x,y[,z],half_edge"
Cube parse_cube(const std::string& text, int dim);

// Expression text, or a JSON file {"g": expr, "initial": expr} or
// {"field": csv} (sampled: nearest node, linear in time).
BoundaryData load_boundary(const std::string& spec, const std::string& initial = "");

// Writes content to dir/name (creating dir), or to stdout when dir is empty.
void emit(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace plw::cli
