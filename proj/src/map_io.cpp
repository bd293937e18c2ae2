// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/map_io.hpp"

#include <fstream>
#include <sstream>

namespace ivmap {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double real_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse, std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::parse, std::string("field \"") + key + "\" is not a number");
  return v.get<double>();
}

std::string string_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse, std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_string()) throw Error(ErrorKind::parse, std::string("field \"") + key + "\" is not a string");
  return v.get<std::string>();
}

}  // namespace

json form_to_json(const Form& form) {
  return std::visit(overloaded{
                        [](const Affine& f) { return json{{"type", "affine"}, {"a", f.a}, {"b", f.b}}; },
                        [](const Polynomial& f) { return json{{"type", "polynomial"}, {"coeffs", f.coeffs}}; },
                        [](const PowerLaw& f) {
                          return json{{"type", "power_law"}, {"v", f.base},         {"k", f.k},
                                      {"rho", f.rho},        {"pivot", f.pivot},    {"side", f.side == PivotSide::left ? "left" : "right"}};
                        },
                        [](const Scaled& f) {
                          return json{{"type", "scaled"},   {"inner", form_to_json(*f.inner)}, {"scale", f.scale},
                                      {"offset", f.offset}, {"anchor", f.anchor}};
                        },
                    },
                    form.get());
}

Form form_from_json(const json& j) {
  const std::string type = string_field(j, "type");
  if (type == "affine") return Form(Affine{real_field(j, "a"), real_field(j, "b")});
  if (type == "polynomial") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array()) throw Error(ErrorKind::parse, "polynomial needs \"coeffs\" array");
    Polynomial p;
    for (const json& c : j.at("coeffs")) {
      if (!c.is_number()) throw Error(ErrorKind::parse, "polynomial coefficient is not a number");
      p.coeffs.push_back(c.get<double>());
    }
    return Form(std::move(p));
  }
  if (type == "power_law") {
    const std::string side = string_field(j, "side");
    if (side != "left" && side != "right") throw Error(ErrorKind::parse, "power_law side must be left or right");
    PowerLaw p{real_field(j, "v"), real_field(j, "k"), real_field(j, "rho"), real_field(j, "pivot"),
               side == "left" ? PivotSide::left : PivotSide::right};
    if (!(p.rho > 0.0)) throw Error(ErrorKind::bad_param, "power_law requires rho > 0");
    return Form(p);
  }
  if (type == "scaled") {
    if (!j.contains("inner")) throw Error(ErrorKind::parse, "scaled form needs \"inner\"");
    return Form::scaled(form_from_json(j.at("inner")), real_field(j, "scale"), real_field(j, "offset"),
                        real_field(j, "anchor"));
  }
  throw Error(ErrorKind::parse, "unknown form type \"" + type + "\"");
}

json map_to_json(const PiecewiseMap& map) {
  json branches = json::array();
  for (const Branch& b : map.branches()) {
    branches.push_back(json{{"lo", b.lo},
                            {"hi", b.hi},
                            {"form", form_to_json(b.form)},
                            {"orientation", b.orientation == Orientation::increasing ? "increasing" : "decreasing"}});
  }
  return json{{"name", map.name()},
              {"exceptional_set", map.exceptional_set()},
              {"branches", std::move(branches)},
              {"provenance", map.provenance()}};
}

PiecewiseMap map_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "map spec must be a JSON object");
  const std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  std::vector<double> exceptional;
  if (j.contains("exceptional_set")) {
    if (!j.at("exceptional_set").is_array()) throw Error(ErrorKind::parse, "\"exceptional_set\" must be an array");
    for (const json& c : j.at("exceptional_set")) {
      if (!c.is_number()) throw Error(ErrorKind::parse, "exceptional point is not a number");
      exceptional.push_back(c.get<double>());
    }
  }
  if (!j.contains("branches") || !j.at("branches").is_array()) throw Error(ErrorKind::parse, "missing \"branches\" array");
  std::vector<Branch> branches;
  for (const json& b : j.at("branches")) {
    if (!b.contains("form")) throw Error(ErrorKind::parse, "branch without \"form\"");
    Orientation o = Orientation::increasing;
    if (b.contains("orientation")) {
      const std::string s = string_field(b, "orientation");
      if (s == "decreasing") {
        o = Orientation::decreasing;
      } else if (s != "increasing") {
        throw Error(ErrorKind::parse, "orientation must be increasing or decreasing");
      }
    }
    branches.push_back(Branch{real_field(b, "lo"), real_field(b, "hi"), form_from_json(b.at("form")), o});
  }
  json provenance = j.contains("provenance") ? j.at("provenance") : json::object();
  return PiecewiseMap(name, std::move(branches), std::move(exceptional), std::move(provenance));
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

std::string map_to_string(const PiecewiseMap& map) { return dump_canonical(map_to_json(map)); }

PiecewiseMap map_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  return map_from_json(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

PiecewiseMap load_map(const std::string& path) { return map_from_string(read_file(path)); }

void save_map(const PiecewiseMap& map, const std::string& path) { write_file(path, map_to_string(map)); }

json report_to_json(const ValidationReport& r) {
  auto flags = [](const std::vector<PointFlag>& v) {
    json a = json::array();
    for (const PointFlag& p : v) a.push_back(json{{"x", p.x}, {"value", p.value}});
    return a;
  };
  json fixed = json::array();
  for (const FixedPoint& f : r.repelling_fixed_points) fixed.push_back(json{{"x", f.x}, {"multiplier", f.multiplier}});
  return json{{"grid_n", r.grid_n},
              {"clean", r.clean()},
              {"tiling", {{"ok", r.tiling_ok()}, {"violations", r.tiling}}},
              {"range", {{"ok", r.range_ok()}, {"violations", r.range_violations}, {"examples", flags(r.range_examples)}}},
              {"schwarzian",
               {{"ok", r.schwarzian_ok()},
                {"nonnegative", r.schwarzian_nonnegative},
                {"skipped_critical", r.schwarzian_skipped},
                {"examples", flags(r.schwarzian_examples)}}},
              {"orientation", {{"ok", r.orientation_ok()}, {"violations", r.orientation}}},
              {"repelling_interior_fixed_points", std::move(fixed)}};
}

}  // namespace ivmap
