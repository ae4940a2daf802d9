#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "twoscale/core/discrete_dist.hpp"
#include "twoscale/core/grid_value_fn.hpp"

namespace twoscale {

using json = nlohmann::json;

/// Extended reals in JSON: finite numbers as numbers, infinities as the
/// strings "inf" / "-inf".
json ext_to_json(double v);
double ext_from_json(const json& j);

/// {"axes": [[...], ...], "values": [...row-major...], "interp": "multilinear"}
json to_json(const GridValueFn& f);
GridValueFn grid_fn_from_json(const json& j);

/// {"atoms": [[...], ...], "probs": [...]}
json to_json(const DiscreteDist& d);
DiscreteDist dist_from_json(const json& j);

/// Little-endian binary table: magic "TSGV", version, interp, dims, extents,
/// breakpoints, values.
void write_binary(std::ostream& os, const GridValueFn& f);
GridValueFn read_binary(std::istream& is);

void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);

}  // namespace twoscale
