// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_MAP_IO_HPP
#define IVMAP_MAP_IO_HPP

#include <string>

#include "json.hpp"

#include "ivmap/piecewise_map.hpp"

namespace ivmap {

// Map specification documents:
//   {"name", "exceptional_set": [..], "branches": [{"lo","hi","form":{..},"orientation"}], "provenance"}
// Forms are tagged by "type": affine{a,b}, polynomial{coeffs}, power_law{v,k,rho,pivot,side},
// scaled{inner,scale,offset,anchor}.

nlohmann::json form_to_json(const Form& form);
Form form_from_json(const nlohmann::json& j);

nlohmann::json map_to_json(const PiecewiseMap& map);
PiecewiseMap map_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, two-space indent, shortest round-trip reals, trailing newline.
std::string dump_canonical(const nlohmann::json& j);
std::string map_to_string(const PiecewiseMap& map);
PiecewiseMap map_from_string(const std::string& text);

PiecewiseMap load_map(const std::string& path);
void save_map(const PiecewiseMap& map, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace ivmap

#endif  // IVMAP_MAP_IO_HPP
